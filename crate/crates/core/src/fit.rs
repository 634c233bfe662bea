//! Refined choice strategy: estimate the gridpoints-per-wavelength interval
//! from a priori velocity/frequency bounds, sample the dispersion identity
//! over (theta, G), and solve the overdetermined linear system for the
//! scheme parameters in the least-squares sense.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dispersion::{dispersion_functional, pq};
use crate::error::{Error, Result};
use crate::stencil::{Scheme, SchemeKind, SchemeParams17, SchemeParams25};

const PI: f64 = std::f64::consts::PI;

/// Hard bounds of the admissible G interval (Nyquist floor and the paper's
/// upper cap).
pub const G_FLOOR: f64 = 2.0;
pub const G_CAP: f64 = 400.0;

/// Rows whose largest entry (right-hand side included) falls below this are
/// dropped as degenerate (the P = Q = 1 corner).
const ROW_DROP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IgEstimate {
    pub ig: (f64, f64),
    /// Lower bound was raised to the Nyquist floor.
    pub clipped_low: bool,
    /// Upper bound was lowered to the cap.
    pub clipped_high: bool,
    /// Interval was degenerate and widened by +-10%.
    pub widened: bool,
}

/// A priori interval `[v_min/(h f_max), v_max/(h f_min)]`, clipped into
/// `[2, 400]`; a degenerate interval (constant velocity, single frequency)
/// is widened by ten percent on each side.
pub fn estimate_ig(v_min: f64, v_max: f64, f_min: f64, f_max: f64, h: f64) -> Result<IgEstimate> {
    if !(v_min > 0.0 && v_max >= v_min) {
        return Err(Error::InvalidParam(format!("bad velocity bounds [{v_min}, {v_max}]")));
    }
    if !(f_min > 0.0 && f_max >= f_min) {
        return Err(Error::InvalidParam(format!("bad frequency bounds [{f_min}, {f_max}]")));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidParam(format!("bad spacing {h}")));
    }
    let mut lo = v_min / (h * f_max);
    let mut hi = v_max / (h * f_min);
    let mut widened = false;
    if (hi - lo) / hi.max(1.0) < 1e-12 {
        lo *= 0.9;
        hi *= 1.1;
        widened = true;
    }
    if !(lo <= hi) {
        return Err(Error::EmptyInterval { lo, hi });
    }
    let clipped_low = lo < G_FLOOR;
    let clipped_high = hi > G_CAP;
    lo = lo.clamp(G_FLOOR, G_CAP);
    hi = hi.clamp(G_FLOOR, G_CAP);
    if !(lo < hi) {
        // the whole a priori interval collapsed onto one end of [2, 400];
        // open a minimal band there so a fit is still possible
        widened = true;
        if hi >= G_CAP {
            lo = G_CAP / 1.1;
        } else {
            hi = G_FLOOR * 1.1;
        }
    }
    Ok(IgEstimate { ig: (lo, hi), clipped_low, clipped_high, widened })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FitConfig {
    pub ig: (f64, f64),
    /// Angle interval; `None` picks `[0, pi/4]` for gamma = 1 (exchange
    /// symmetry) and `[0, pi/2]` otherwise.
    pub itheta: Option<(f64, f64)>,
    pub l: usize,
    pub r: usize,
    pub gamma: f64,
}

impl FitConfig {
    pub const DEFAULT_SAMPLES: usize = 64;

    pub fn new(ig: (f64, f64), gamma: f64) -> Result<Self> {
        let cfg = Self {
            ig,
            itheta: None,
            l: Self::DEFAULT_SAMPLES,
            r: Self::DEFAULT_SAMPLES,
            gamma,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_samples(mut self, l: usize, r: usize) -> Result<Self> {
        self.l = l;
        self.r = r;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.ig;
        if !(G_FLOOR <= lo && lo < hi && hi <= G_CAP) {
            return Err(Error::InvalidParam(format!(
                "I_G = [{lo}, {hi}] must satisfy 2 <= G_min < G_max <= 400"
            )));
        }
        if self.l < 2 || self.r < 2 {
            return Err(Error::InvalidParam(format!(
                "need at least 2 samples per axis, got l = {}, r = {}",
                self.l, self.r
            )));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::InvalidParam(format!("gamma must be positive, got {}", self.gamma)));
        }
        if let Some((a, b)) = self.itheta {
            if !(a < b) {
                return Err(Error::InvalidParam(format!("bad theta interval [{a}, {b}]")));
            }
        }
        Ok(())
    }

    pub fn theta_interval(&self) -> (f64, f64) {
        self.itheta.unwrap_or(if self.gamma == 1.0 { (0.0, PI / 4.0) } else { (0.0, PI / 2.0) })
    }
}

/// Uniform theta samples crossed with samples uniform in 1/G.
pub fn sample_grid(cfg: &FitConfig) -> Vec<(f64, f64)> {
    sample_grid_counts(cfg, cfg.l, cfg.r)
}

fn sample_grid_counts(cfg: &FitConfig, l: usize, r: usize) -> Vec<(f64, f64)> {
    let (t0, t1) = cfg.theta_interval();
    let (g_min, g_max) = cfg.ig;
    let (inv0, inv1) = (1.0 / g_max, 1.0 / g_min);
    let mut out = Vec::with_capacity(l * r);
    for m in 0..l {
        let theta = t0 + (t1 - t0) * m as f64 / (l - 1) as f64;
        for n in 0..r {
            let inv = inv0 + (inv1 - inv0) * n as f64 / (r - 1) as f64;
            out.push((theta, 1.0 / inv));
        }
    }
    out
}

/// The five least-squares entries of the 25-point system at one sample:
/// coefficients of (a1, c2, c3, c4) and the right-hand side.
pub fn lsq_rows_25(theta: f64, g: f64, gamma: f64) -> [f64; 5] {
    let eta = 1.0 + 1.0 / (gamma * gamma);
    let (p, q) = pq(theta, g, gamma);
    let g2 = g * g;
    let pi2 = PI * PI;
    let s1 = -2.0 * g2 * (q - 1.0) * (p - 1.0)
        * (eta * (p - 1.0) * (q - 7.0) + 6.0 * (p - q));
    let s2 = -12.0 * pi2 * (p * p + q * q - 2.0 * (p + q - 1.0));
    let s3 = -24.0 * pi2
        * ((2.0 * p * p - 1.0) * q * q - 2.0 * (p * q - 1.0) - p * p);
    let s4 = 8.0 * pi2
        * ((2.0 * p * p - 4.0 * p - 1.0) * q * (q - 2.0) - p * p + 2.0 * p - 4.0);
    // right-hand side: the constant block of the rearranged identity
    let s5 = -((q - 1.0) * (q - 7.0) * (2.0 * p * p - 4.0 * p - 1.0) * eta
        + 3.0 * (p - q) * ((4.0 * p - 5.0) * q - 5.0 * p + 12.0))
        * g2
        - 36.0 * pi2;
    [s1, s2, s3, s4, s5]
}

/// The four entries of the 17-point system: coefficients of (b1, d2, d3) and
/// the right-hand side.
pub fn lsq_rows_17(theta: f64, g: f64, gamma: f64) -> [f64; 4] {
    let eta = 1.0 + 1.0 / (gamma * gamma);
    let (p, q) = pq(theta, g, gamma);
    let g2 = g * g;
    let pi2 = PI * PI;
    let w1 = -2.0 * eta * (q - 1.0) * (p - 1.0) * (p + q + p * q - 3.0) * g2;
    let w2 = 4.0 * pi2 * (p * p - 2.0 * p + q * q - 2.0 * q + 2.0);
    let w3 = 8.0 * pi2
        * (2.0 * p * p * q * q - p * p - 2.0 * p * q - q * q + 2.0);
    // the paper's constant block sits on the left of the identity; negate it
    // for the right-hand side
    let w4 = ((q - 1.0) * (2.0 * p * p * q - q - 8.0 * p + 2.0 * p * p - 1.0) * eta
        + (p - q) * (p + q - 8.0))
        * g2
        - 12.0 * pi2;
    [w1, w2, w3, -w4]
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    #[serde(skip)]
    pub scheme: Scheme,
    pub residual: f64,
    pub max_j: f64,
    pub warnings: Vec<String>,
    pub dropped_rows: usize,
    /// Validation samples excluded for degenerate/evanescent dispersion.
    pub excluded_validation: usize,
    pub ig: (f64, f64),
    pub gamma: f64,
}

fn solve_lsq(rows: &[Vec<f64>], rhs: &[f64], need: usize) -> Result<(DVector<f64>, f64)> {
    if rows.len() < need {
        return Err(Error::RankDeficient { rank: rows.len(), need });
    }
    let a = DMatrix::from_fn(rows.len(), need, |i, j| rows[i][j]);
    let b = DVector::from_column_slice(rhs);
    let qr = a.clone().qr();
    let r = qr.r();
    let mut max_diag = 0.0f64;
    let mut min_diag = f64::INFINITY;
    for i in 0..need {
        let d = r[(i, i)].abs();
        max_diag = max_diag.max(d);
        min_diag = min_diag.min(d);
    }
    if !(min_diag > 1e-12 * max_diag.max(1e-300)) {
        let rank = (0..need).filter(|&i| r[(i, i)].abs() > 1e-12 * max_diag).count();
        return Err(Error::RankDeficient { rank, need });
    }
    let qtb = qr.q().transpose() * &b;
    let x = r
        .solve_upper_triangular(&qtb)
        .ok_or(Error::RankDeficient { rank: need - 1, need })?;
    let residual = (a * &x - b).norm();
    Ok((x, residual))
}

fn validation_max_j(scheme: &Scheme, cfg: &FitConfig) -> (f64, usize) {
    let samples = sample_grid_counts(cfg, 2 * cfg.l, 2 * cfg.r);
    let mut max_j = 0.0f64;
    let mut excluded = 0usize;
    for (theta, g) in samples {
        match dispersion_functional(scheme, theta, g, cfg.gamma) {
            Ok(j) => max_j = max_j.max(j.abs()),
            Err(_) => excluded += 1,
        }
    }
    (max_j, excluded)
}

fn collect_rows<const W: usize>(
    cfg: &FitConfig,
    row_fn: impl Fn(f64, f64, f64) -> [f64; W],
) -> (Vec<Vec<f64>>, Vec<f64>, usize) {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut dropped = 0usize;
    for (theta, g) in sample_grid(cfg) {
        let entries = row_fn(theta, g, cfg.gamma);
        let max_abs = entries.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if max_abs < ROW_DROP_TOL {
            dropped += 1;
            continue;
        }
        rows.push(entries[..W - 1].to_vec());
        rhs.push(entries[W - 1]);
    }
    (rows, rhs, dropped)
}

/// Least-squares parameter selection for the 25-point scheme (Algorithm 1).
pub fn fit_params_25(cfg: &FitConfig) -> Result<FitReport> {
    cfg.validate()?;
    let (rows, rhs, dropped) = collect_rows(cfg, lsq_rows_25);
    let (x, residual) = solve_lsq(&rows, &rhs, 4)?;
    let params = SchemeParams25::new(x[0], x[1], x[2], x[3])?;
    let mut warnings = Vec::new();
    if !(params.a1 > 0.0 && params.a1 <= 1.0) {
        warnings.push(format!("a1 = {} outside (0, 1]", params.a1));
    }
    let scheme = Scheme::Pw25(params);
    let (max_j, excluded_validation) = validation_max_j(&scheme, cfg);
    Ok(FitReport {
        scheme,
        residual,
        max_j,
        warnings,
        dropped_rows: dropped,
        excluded_validation,
        ig: cfg.ig,
        gamma: cfg.gamma,
    })
}

/// Least-squares parameter selection for the 17-point scheme (Algorithm 2).
pub fn fit_params_17(cfg: &FitConfig) -> Result<FitReport> {
    cfg.validate()?;
    let (rows, rhs, dropped) = collect_rows(cfg, lsq_rows_17);
    let (x, residual) = solve_lsq(&rows, &rhs, 3)?;
    let params = SchemeParams17::new(x[0], x[1], x[2])?;
    let mut warnings = Vec::new();
    if !(params.b1 > 0.0 && params.b1 <= 1.0) {
        warnings.push(format!("b1 = {} outside (0, 1]", params.b1));
    }
    let scheme = Scheme::Pw17(params);
    let (max_j, excluded_validation) = validation_max_j(&scheme, cfg);
    Ok(FitReport {
        scheme,
        residual,
        max_j,
        warnings,
        dropped_rows: dropped,
        excluded_validation,
        ig: cfg.ig,
        gamma: cfg.gamma,
    })
}

/// Fit the given scheme family; the baselines have nothing to fit.
pub fn fit_scheme(kind: SchemeKind, cfg: &FitConfig) -> Result<(Scheme, Option<FitReport>)> {
    match kind {
        SchemeKind::Pw25 => {
            let rep = fit_params_25(cfg)?;
            Ok((rep.scheme, Some(rep)))
        }
        SchemeKind::Pw17 => {
            let rep = fit_params_17(cfg)?;
            Ok((rep.scheme, Some(rep)))
        }
        SchemeKind::Nc4 => Ok((Scheme::Nc4, None)),
        SchemeKind::Conventional5 => Ok((Scheme::Conventional5, None)),
    }
}
