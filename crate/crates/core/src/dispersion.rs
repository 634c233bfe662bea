//! Plane-wave dispersion analysis: the closed-form stencil symbols, the
//! numerical wavenumber, normalized phase/group velocities and the
//! dispersion functional driving parameter selection.
//!
//! A plane wave `exp(-ik(x cos t + z sin t))` turns the stencil into the
//! scalar symbol `sum_c f_c(P, Q) T_c`, where each `T_c` is affine in
//! `1/h^2` (flux part `L_c`) and `k^2` (mass part `M_c`). Setting the symbol
//! to zero and solving for the wavenumber carried by the mass term yields
//! `k_N = (1/h) sqrt(N/D)` with `N = -sum f L` and `D = sum f M`.

use crate::error::{Error, Result};
use crate::stencil::{Scheme, SchemeParams17, SchemeParams25};

/// Tolerance below which the denominator D is treated as degenerate.
const D_TOL: f64 = 1e-13;

/// P = cos((2 pi / G) cos theta), Q = cos(gamma (2 pi / G) sin theta).
pub fn pq(theta: f64, g: f64, gamma: f64) -> (f64, f64) {
    let kh = 2.0 * std::f64::consts::PI / g;
    ((kh * theta.cos()).cos(), (gamma * kh * theta.sin()).cos())
}

/// Offset classes of the 25-point symbol, in the paper's order:
/// (+-2,+-2), (+-1,+-2), (0,+-2), (+-2,+-1), (+-1,+-1), (0,+-1), (+-2,0),
/// (+-1,0), (0,0).
pub const CLASSES_25: [(i32, i32); 9] =
    [(2, 2), (1, 2), (0, 2), (2, 1), (1, 1), (0, 1), (2, 0), (1, 0), (0, 0)];

/// Offset classes of the 17-point symbol: (+-2,+-2), (0,+-2), (+-1,+-1),
/// (0,+-1), (+-2,0), (+-1,0), (0,0).
pub const CLASSES_17: [(i32, i32); 7] =
    [(2, 2), (0, 2), (1, 1), (0, 1), (2, 0), (1, 0), (0, 0)];

fn trig_factors_25(p: f64, q: f64) -> [f64; 9] {
    let p2 = 2.0 * p * p - 1.0;
    let q2 = 2.0 * q * q - 1.0;
    [4.0 * p2 * q2, 4.0 * p * q2, 2.0 * q2, 4.0 * q * p2, 4.0 * p * q, 2.0 * q, 2.0 * p2, 2.0 * p, 1.0]
}

fn trig_factors_25_dp(p: f64, q: f64) -> [f64; 9] {
    let q2 = 2.0 * q * q - 1.0;
    [16.0 * p * q2, 4.0 * q2, 0.0, 16.0 * p * q, 4.0 * q, 0.0, 8.0 * p, 2.0, 0.0]
}

fn trig_factors_25_dq(p: f64, q: f64) -> [f64; 9] {
    let p2 = 2.0 * p * p - 1.0;
    [16.0 * q * p2, 16.0 * p * q, 8.0 * q, 4.0 * p2, 4.0 * p, 2.0, 0.0, 0.0, 0.0]
}

fn trig_factors_17(p: f64, q: f64) -> [f64; 7] {
    let p2 = 2.0 * p * p - 1.0;
    let q2 = 2.0 * q * q - 1.0;
    [4.0 * p2 * q2, 2.0 * q2, 4.0 * p * q, 2.0 * q, 2.0 * p2, 2.0 * p, 1.0]
}

fn trig_factors_17_dp(p: f64, q: f64) -> [f64; 7] {
    let q2 = 2.0 * q * q - 1.0;
    [16.0 * p * q2, 0.0, 4.0 * q, 0.0, 8.0 * p, 2.0, 0.0]
}

fn trig_factors_17_dq(p: f64, q: f64) -> [f64; 7] {
    let p2 = 2.0 * p * p - 1.0;
    [16.0 * q * p2, 8.0 * q, 4.0 * p, 2.0, 0.0, 0.0, 0.0]
}

/// Flux (`1/h^2`) and mass (`k^2`) parts of the nine 25-point symbols.
pub fn symbol_parts_25(params: &SchemeParams25, eta: f64) -> ([f64; 9], [f64; 9]) {
    let a1 = params.a1;
    let (c2, c3, c4) = (params.c2, params.c3, params.c4);
    let lap = [
        (1.0 - a1) * eta / 72.0,
        (eta + 3.0) * (a1 - 1.0) / 18.0,
        (5.0 - a1 * (eta + 4.0)) / 12.0,
        (4.0 * eta - 3.0) * (a1 - 1.0) / 18.0,
        8.0 * eta * (1.0 - a1) / 9.0,
        (a1 * (4.0 * eta + 1.0) - 5.0) / 3.0,
        (4.0 * a1 + 5.0 * eta * (1.0 - a1) - 5.0) / 12.0,
        (5.0 * eta * (a1 - 1.0) - a1 + 5.0) / 3.0,
        -2.5 * a1 * eta,
    ];
    let mass = [
        -(3.0 * c3 - c4) / 36.0,
        -c4 / 9.0,
        -c2 / 12.0,
        -c4 / 9.0,
        (3.0 * c3 + 4.0 * c4) / 9.0,
        c2 / 3.0,
        -c2 / 12.0,
        c2 / 3.0,
        1.0 - c2 - c3 - c4,
    ];
    (lap, mass)
}

/// Flux and mass parts of the seven 17-point symbols.
pub fn symbol_parts_17(params: &SchemeParams17, eta: f64) -> ([f64; 7], [f64; 7]) {
    let b1 = params.b1;
    let (d2, d3) = (params.d2, params.d3);
    let lap = [
        (b1 - 1.0) * eta / 24.0,
        (1.0 - b1 * eta) / 12.0,
        2.0 * (1.0 - b1) * eta / 3.0,
        (4.0 * b1 * eta - 4.0) / 3.0,
        ((1.0 - b1) * eta - 1.0) / 12.0,
        (4.0 * (b1 - 1.0) * eta + 4.0) / 3.0,
        -2.5 * b1 * eta,
    ];
    let mass = [
        -d3 / 12.0,
        -d2 / 12.0,
        d3 / 3.0,
        d2 / 3.0,
        -d2 / 12.0,
        d2 / 3.0,
        1.0 - d2 - d3,
    ];
    (lap, mass)
}

/// The nine closed-form symbols T*_1..T*_9 at given k, h, eta.
pub fn symbols_25(params: &SchemeParams25, k: f64, h: f64, eta: f64) -> [f64; 9] {
    let (lap, mass) = symbol_parts_25(params, eta);
    let mut t = [0.0; 9];
    for i in 0..9 {
        t[i] = lap[i] / (h * h) + mass[i] * k * k;
    }
    t
}

/// The seven closed-form symbols for the 17-point scheme.
pub fn symbols_17(params: &SchemeParams17, k: f64, h: f64, eta: f64) -> [f64; 7] {
    let (lap, mass) = symbol_parts_17(params, eta);
    let mut t = [0.0; 7];
    for i in 0..7 {
        t[i] = lap[i] / (h * h) + mass[i] * k * k;
    }
    t
}

fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        acc += a[i] * b[i];
    }
    acc
}

fn scheme_eta_parts(scheme: &Scheme, eta: f64) -> Result<(Vec<f64>, Vec<f64>, bool)> {
    match scheme {
        Scheme::Pw25(p) => {
            let (l, m) = symbol_parts_25(p, eta);
            Ok((l.to_vec(), m.to_vec(), false))
        }
        Scheme::Nc4 => {
            let (l, m) = symbol_parts_25(&SchemeParams25::baseline(), eta);
            Ok((l.to_vec(), m.to_vec(), false))
        }
        Scheme::Pw17(p) => {
            let (l, m) = symbol_parts_17(p, eta);
            Ok((l.to_vec(), m.to_vec(), true))
        }
        Scheme::Conventional5 => Err(Error::InvalidParam(
            "dispersion closed forms are defined for the fourth-order schemes only".into(),
        )),
    }
}

/// Rational-form numerator and denominator: `k_N^2 h^2 = N / D`.
pub fn nd(scheme: &Scheme, theta: f64, g: f64, gamma: f64) -> Result<(f64, f64)> {
    let eta = 1.0 + 1.0 / (gamma * gamma);
    let (p, q) = pq(theta, g, gamma);
    let (lap, mass, is17) = scheme_eta_parts(scheme, eta)?;
    if is17 {
        let f = trig_factors_17(p, q);
        let l: [f64; 7] = lap.try_into().unwrap();
        let m: [f64; 7] = mass.try_into().unwrap();
        Ok((-dot(&f, &l), dot(&f, &m)))
    } else {
        let f = trig_factors_25(p, q);
        let l: [f64; 9] = lap.try_into().unwrap();
        let m: [f64; 9] = mass.try_into().unwrap();
        Ok((-dot(&f, &l), dot(&f, &m)))
    }
}

fn ratio_checked(scheme: &Scheme, theta: f64, g: f64, gamma: f64) -> Result<f64> {
    let (n, d) = nd(scheme, theta, g, gamma)?;
    if d.abs() < D_TOL {
        return Err(Error::DegenerateDenominator { theta, g, d });
    }
    let ratio = n / d;
    if ratio < 0.0 {
        return Err(Error::EvanescentMode { theta, g, ratio });
    }
    Ok(ratio)
}

/// Numerical wavenumber `k_N = (1/h) sqrt(N/D)`.
pub fn numerical_wavenumber(
    scheme: &Scheme,
    theta: f64,
    g: f64,
    gamma: f64,
    h: f64,
) -> Result<f64> {
    Ok(ratio_checked(scheme, theta, g, gamma)?.sqrt() / h)
}

/// Normalized numerical phase velocity `V_ph / v = k_N / k = (G/2pi) sqrt(N/D)`.
pub fn phase_velocity_ratio(scheme: &Scheme, theta: f64, g: f64, gamma: f64) -> Result<f64> {
    Ok(g / (2.0 * std::f64::consts::PI) * ratio_checked(scheme, theta, g, gamma)?.sqrt())
}

/// Normalized numerical group velocity `d(v k_N)/d omega = dk_N/dk`, computed
/// with analytic chain-rule derivatives of N and D through P and Q.
pub fn group_velocity_ratio(scheme: &Scheme, theta: f64, g: f64, gamma: f64) -> Result<f64> {
    let eta = 1.0 + 1.0 / (gamma * gamma);
    let (p, q) = pq(theta, g, gamma);
    // work in units h = 1, where k h = 2 pi / G
    let kh = 2.0 * std::f64::consts::PI / g;
    let dp_dk = -theta.cos() * (kh * theta.cos()).sin();
    let dq_dk = -gamma * theta.sin() * (gamma * kh * theta.sin()).sin();
    let (lap, mass, is17) = scheme_eta_parts(scheme, eta)?;
    let (n, d, n_k, d_k) = if is17 {
        let l: [f64; 7] = lap.try_into().unwrap();
        let m: [f64; 7] = mass.try_into().unwrap();
        let f = trig_factors_17(p, q);
        let fp = trig_factors_17_dp(p, q);
        let fq = trig_factors_17_dq(p, q);
        let n = -dot(&f, &l);
        let d = dot(&f, &m);
        let n_k = -(dot(&fp, &l) * dp_dk + dot(&fq, &l) * dq_dk);
        let d_k = dot(&fp, &m) * dp_dk + dot(&fq, &m) * dq_dk;
        (n, d, n_k, d_k)
    } else {
        let l: [f64; 9] = lap.try_into().unwrap();
        let m: [f64; 9] = mass.try_into().unwrap();
        let f = trig_factors_25(p, q);
        let fp = trig_factors_25_dp(p, q);
        let fq = trig_factors_25_dq(p, q);
        let n = -dot(&f, &l);
        let d = dot(&f, &m);
        let n_k = -(dot(&fp, &l) * dp_dk + dot(&fq, &l) * dq_dk);
        let d_k = dot(&fp, &m) * dp_dk + dot(&fq, &m) * dq_dk;
        (n, d, n_k, d_k)
    };
    if d.abs() < D_TOL {
        return Err(Error::DegenerateDenominator { theta, g, d });
    }
    let ratio = n / d;
    if ratio < 0.0 {
        return Err(Error::EvanescentMode { theta, g, ratio });
    }
    let k_n = ratio.sqrt();
    if k_n == 0.0 {
        return Err(Error::EvanescentMode { theta, g, ratio });
    }
    Ok((n_k * d - n * d_k) / (2.0 * k_n * d * d))
}

/// Dispersion functional `J = (G/2pi) sqrt(N/D) - 1`.
pub fn dispersion_functional(scheme: &Scheme, theta: f64, g: f64, gamma: f64) -> Result<f64> {
    Ok(phase_velocity_ratio(scheme, theta, g, gamma)? - 1.0)
}
