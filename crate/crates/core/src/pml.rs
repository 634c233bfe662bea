//! PML damping profiles, complex stretch factors and the coefficient fields
//! A = s_z/s_x, B = s_x/s_z, C = s_x s_z of the Helmholtz-PML equation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Z,
}

/// Which domain edges carry an absorbing layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PmlSides {
    pub left: bool,
    pub right: bool,
    pub top: bool,
    pub bottom: bool,
}

impl PmlSides {
    pub fn all() -> Self {
        Self { left: true, right: true, top: true, bottom: true }
    }

    pub fn none() -> Self {
        Self { left: false, right: false, top: false, bottom: false }
    }
}

impl Default for PmlSides {
    fn default() -> Self {
        Self::all()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmlConfig {
    /// Layer thickness in the grid's length units. Zero disables the PML.
    pub l_pml: f64,
    /// Damping constant of Eq.-style quadratic profile; 1.79 is the paper value.
    pub a0: f64,
    /// Peak source frequency in Hz entering the damping amplitude.
    pub f_m: f64,
    pub sides: PmlSides,
}

impl PmlConfig {
    pub const DEFAULT_A0: f64 = 1.79;

    pub fn new(l_pml: f64, a0: f64, f_m: f64, sides: PmlSides) -> Result<Self> {
        if !(l_pml >= 0.0) {
            return Err(Error::InvalidParam(format!("L_pml must be >= 0, got {l_pml}")));
        }
        if !(a0 > 0.0) {
            return Err(Error::InvalidParam(format!("a0 must be > 0, got {a0}")));
        }
        if !(f_m > 0.0) {
            return Err(Error::InvalidParam(format!("f_M must be > 0, got {f_m}")));
        }
        Ok(Self { l_pml, a0, f_m, sides })
    }

    /// No absorbing layer: the model reduces to the pure Helmholtz equation.
    pub fn disabled() -> Self {
        Self { l_pml: 0.0, a0: Self::DEFAULT_A0, f_m: 1.0, sides: PmlSides::none() }
    }
}

/// Quadratic damping profile sigma(l) = 2 pi a0 f_M (l / L_pml)^2, where l is
/// the penetration depth into the layer along the given axis.
pub fn sigma_profile(pos: f64, axis: Axis, grid: &GridSpec, pml: &PmlConfig) -> Result<f64> {
    if pml.l_pml == 0.0 {
        return Ok(0.0);
    }
    let (lo, hi, cell, enter_lo, enter_hi, name) = match axis {
        Axis::X => {
            let (lo, hi) = grid.x_range();
            (lo, hi, grid.h, pml.sides.left, pml.sides.right, "x")
        }
        Axis::Z => {
            let (lo, hi) = grid.z_range();
            (lo, hi, grid.dz(), pml.sides.top, pml.sides.bottom, "z")
        }
    };
    let mut l = 0.0f64;
    if enter_lo {
        l = l.max(lo + pml.l_pml - pos);
    }
    if enter_hi {
        l = l.max(pos - (hi - pml.l_pml));
    }
    if l > pml.l_pml + cell {
        return Err(Error::PmlGeometry { pos, axis: name });
    }
    let l = l.min(pml.l_pml);
    let ratio = l / pml.l_pml;
    Ok(2.0 * std::f64::consts::PI * pml.a0 * pml.f_m * ratio * ratio)
}

/// s = 1 - i sigma / omega. A zero sigma is the interior value 1 regardless of
/// omega; a positive sigma requires omega > 0.
pub fn stretch_factor(sigma: f64, omega: f64) -> Result<Complex64> {
    if sigma == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if omega == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    Ok(Complex64::new(1.0, -sigma / omega))
}

/// Velocity model plus the frequency of the time-harmonic run; carries the
/// nodal wavenumber field k = 2 pi f / v.
#[derive(Debug, Clone)]
pub struct MediumModel {
    pub velocity: Option<Vec<f64>>,
    pub k: Vec<f64>,
    pub frequency: f64,
    pub omega: f64,
}

impl MediumModel {
    pub fn from_velocity(grid: &GridSpec, velocity: Vec<f64>, frequency: f64) -> Result<Self> {
        if velocity.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "velocity field has {} samples, grid has {}",
                velocity.len(),
                grid.len()
            )));
        }
        if !(frequency > 0.0) {
            return Err(Error::InvalidParam(format!("frequency must be > 0, got {frequency}")));
        }
        if velocity.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParam("velocity must be positive everywhere".into()));
        }
        let omega = 2.0 * std::f64::consts::PI * frequency;
        let k = velocity.iter().map(|&v| omega / v).collect();
        Ok(Self { velocity: Some(velocity), k, frequency, omega })
    }

    pub fn constant(grid: &GridSpec, velocity: f64, frequency: f64) -> Result<Self> {
        Self::from_velocity(grid, vec![velocity; grid.len()], frequency)
    }

    /// Directly prescribed wavenumber field (dimensionless problems such as
    /// the manufactured-solution study). No frequency is attached, so the
    /// model cannot be combined with an active PML.
    pub fn from_wavenumber(grid: &GridSpec, k: Vec<f64>) -> Result<Self> {
        if k.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "wavenumber field has {} samples, grid has {}",
                k.len(),
                grid.len()
            )));
        }
        if k.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParam("wavenumber must be positive everywhere".into()));
        }
        Ok(Self { velocity: None, k, frequency: 0.0, omega: 0.0 })
    }

    pub fn velocity_extremes(&self) -> Option<(f64, f64)> {
        let v = self.velocity.as_ref()?;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &x in v {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        Some((lo, hi))
    }
}

/// Complex coefficients sampled everywhere the fourth-order flux stencils
/// read them: A at half offsets along x, B at half offsets along z, C and k
/// at nodes. All values are evaluated analytically from the closed-form
/// stretch factors, never interpolated.
#[derive(Debug, Clone)]
pub struct CoefficientFields {
    pub nx: usize,
    pub nz: usize,
    /// A at (x0 + (i + 1/2) h, z_n); index `n * (nx - 1) + i`.
    a_half: Vec<Complex64>,
    /// B at (x_m, z0 + (j + 1/2) dz); index `j * nx + m`.
    b_half: Vec<Complex64>,
    c: Vec<Complex64>,
    k: Vec<f64>,
}

impl CoefficientFields {
    /// A at the half position between nodes `i` and `i + 1`, on z-line `n`.
    pub fn a_half(&self, i: usize, n: usize) -> Complex64 {
        self.a_half[n * (self.nx - 1) + i]
    }

    /// B at the half position between z-lines `j` and `j + 1`, on column `m`.
    pub fn b_half(&self, m: usize, j: usize) -> Complex64 {
        self.b_half[j * self.nx + m]
    }

    pub fn c(&self, m: usize, n: usize) -> Complex64 {
        self.c[n * self.nx + m]
    }

    pub fn k(&self, m: usize, n: usize) -> f64 {
        self.k[n * self.nx + m]
    }

    /// k^2 C at a node: the mass-term coefficient.
    pub fn k2c(&self, m: usize, n: usize) -> Complex64 {
        let k = self.k(m, n);
        self.c(m, n) * (k * k)
    }

    /// Sample arbitrary coefficient functions on the grid. Used by the
    /// manufactured-solution study (A = B = C = 1 with a variable k) and by
    /// order-verification tests with smooth synthetic coefficients.
    pub fn from_functions(
        grid: &GridSpec,
        fa: impl Fn(f64, f64) -> Complex64,
        fb: impl Fn(f64, f64) -> Complex64,
        fc: impl Fn(f64, f64) -> Complex64,
        fk: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let (nx, nz) = (grid.nx, grid.nz);
        let mut a_half = Vec::with_capacity((nx - 1) * nz);
        for n in 0..nz {
            let z = grid.z(n);
            for i in 0..nx - 1 {
                a_half.push(fa(grid.x(i) + 0.5 * grid.h, z));
            }
        }
        let mut b_half = Vec::with_capacity(nx * (nz - 1));
        for j in 0..nz - 1 {
            let z = grid.z(j) + 0.5 * grid.dz();
            for m in 0..nx {
                b_half.push(fb(grid.x(m), z));
            }
        }
        let mut c = Vec::with_capacity(nx * nz);
        let mut k = Vec::with_capacity(nx * nz);
        for n in 0..nz {
            let z = grid.z(n);
            for m in 0..nx {
                let x = grid.x(m);
                c.push(fc(x, z));
                k.push(fk(x, z));
            }
        }
        Self { nx, nz, a_half, b_half, c, k }
    }

    /// All-ones A, B, C with a constant wavenumber; the dispersion-analysis
    /// medium.
    pub fn uniform(grid: &GridSpec, k: f64) -> Self {
        let one = |_x: f64, _z: f64| Complex64::new(1.0, 0.0);
        Self::from_functions(grid, one, one, one, |_, _| k)
    }
}

/// Evaluate A, B, C, k for a medium inside a (possibly disabled) PML.
pub fn coefficient_fields(
    grid: &GridSpec,
    medium: &MediumModel,
    pml: &PmlConfig,
) -> Result<CoefficientFields> {
    let (nx, nz) = (grid.nx, grid.nz);
    let omega = medium.omega;
    let sx = |x: f64| -> Result<Complex64> {
        stretch_factor(sigma_profile(x, Axis::X, grid, pml)?, omega)
    };
    let sz = |z: f64| -> Result<Complex64> {
        stretch_factor(sigma_profile(z, Axis::Z, grid, pml)?, omega)
    };

    let mut a_half = Vec::with_capacity((nx - 1) * nz);
    for n in 0..nz {
        let szv = sz(grid.z(n))?;
        for i in 0..nx - 1 {
            let sxv = sx(grid.x(i) + 0.5 * grid.h)?;
            a_half.push(szv / sxv);
        }
    }
    let mut b_half = Vec::with_capacity(nx * (nz - 1));
    for j in 0..nz - 1 {
        let szv = sz(grid.z(j) + 0.5 * grid.dz())?;
        for m in 0..nx {
            let sxv = sx(grid.x(m))?;
            b_half.push(sxv / szv);
        }
    }
    let mut c = Vec::with_capacity(nx * nz);
    for n in 0..nz {
        let szv = sz(grid.z(n))?;
        for m in 0..nx {
            let sxv = sx(grid.x(m))?;
            c.push(sxv * szv);
        }
    }
    Ok(CoefficientFields { nx, nz, a_half, b_half, c, k: medium.k.clone() })
}
