//! Manufactured variable-wavenumber problem on the unit square.
//!
//! `Delta p + k^2 p = g` on `(0,1)^2` with
//! `k = k0 (exp(-k0 (x+z)) + 1)` and exact solution
//! `p = sin(pi x) sin(pi z) exp(i k0 (x cos(theta) + z sin(theta)))`.
//! Dirichlet data comes from the exact solution, so the measured error is the
//! pure discretization error of a scheme.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::field::{cnorm, Field};
use crate::fit::{estimate_ig, FitConfig, FitReport, IgEstimate};
use crate::grid::GridSpec;
use crate::linsys::{assemble, solve, ClosurePolicy, DirichletData, SourceSpec};
use crate::pml::{coefficient_fields, MediumModel, PmlConfig};
use crate::stencil::{Scheme, SchemeKind};

#[derive(Debug, Clone, Copy)]
pub struct ManufacturedCase {
    pub k0: f64,
    pub theta: f64,
}

impl ManufacturedCase {
    pub fn wavenumber(&self, x: f64, z: f64) -> f64 {
        self.k0 * ((-self.k0 * (x + z)).exp() + 1.0)
    }

    pub fn exact(&self, x: f64, z: f64) -> Complex64 {
        let phase = self.k0 * (x * self.theta.cos() + z * self.theta.sin());
        (PI * x).sin() * (PI * z).sin() * Complex64::new(0.0, phase).exp()
    }

    /// Right-hand side consistent with the exact solution.
    pub fn rhs(&self, x: f64, z: f64) -> Complex64 {
        let (ct, st) = (self.theta.cos(), self.theta.sin());
        let phase = self.k0 * (x * ct + z * st);
        let u = self.k0 * (x + z);
        let sins = (PI * x).sin() * (PI * z).sin();
        // k^2 - k0^2 = k0^2 e^{-2u} (2 e^{u} + 1)
        let re = sins * (self.k0 * self.k0 * (-2.0 * u).exp() * (2.0 * u.exp() + 1.0)
            - 2.0 * PI * PI);
        let im = 2.0
            * PI
            * self.k0
            * ((PI * x).cos() * (PI * z).sin() * ct + (PI * x).sin() * (PI * z).cos() * st);
        Complex64::new(re, im) * Complex64::new(0.0, phase).exp()
    }

    /// Square grid with `n` points per line, `h = 1/(n-1)`.
    pub fn grid(&self, n: usize) -> Result<GridSpec> {
        GridSpec::new(n, n, 1.0 / (n as f64 - 1.0), 1.0, (0.0, 0.0))
    }

    /// A priori grid-point-per-wavelength interval: `k` ranges over
    /// `[~k0, 2 k0]`, so `G = 2 pi / (h k)` spans `[pi/(k0 h), 2 pi/(k0 h)]`.
    pub fn ig(&self, h: f64) -> Result<IgEstimate> {
        estimate_ig(2.0 * PI, 2.0 * PI, self.k0, 2.0 * self.k0, h)
    }

    pub fn exact_field(&self, grid: &GridSpec) -> Field {
        let mut f = Field::zeros(*grid);
        for n in 0..grid.nz {
            for m in 0..grid.nx {
                f.set(m, n, self.exact(grid.x(m), grid.z(n)));
            }
        }
        f
    }

    pub fn rhs_samples(&self, grid: &GridSpec) -> Vec<Complex64> {
        let mut g = Vec::with_capacity(grid.len());
        for n in 0..grid.nz {
            for m in 0..grid.nx {
                g.push(self.rhs(grid.x(m), grid.z(n)));
            }
        }
        g
    }

    pub fn medium(&self, grid: &GridSpec) -> Result<MediumModel> {
        let mut k = Vec::with_capacity(grid.len());
        for n in 0..grid.nz {
            for m in 0..grid.nx {
                k.push(self.wavenumber(grid.x(m), grid.z(n)));
            }
        }
        MediumModel::from_wavenumber(grid, k)
    }
}

pub struct ManufacturedRun {
    pub n: usize,
    pub h: f64,
    /// C-norm of the error against the exact solution.
    pub error: f64,
    pub residual: f64,
    pub field: Field,
    pub report: Option<FitReport>,
}

/// Fit the scheme for this grid's `I_G`, solve, and measure the C-norm error.
pub fn solve_manufactured(
    case: &ManufacturedCase,
    kind: SchemeKind,
    n: usize,
    tol: f64,
) -> Result<ManufacturedRun> {
    let grid = case.grid(n)?;
    let scheme = fit_for_grid(case, kind, &grid)?;
    solve_manufactured_with(case, &scheme.0, n, tol, scheme.1)
}

pub fn fit_for_grid(
    case: &ManufacturedCase,
    kind: SchemeKind,
    grid: &GridSpec,
) -> Result<(Scheme, Option<FitReport>)> {
    let ig = case.ig(grid.h)?;
    let cfg = FitConfig::new(ig.ig, grid.gamma)?;
    crate::fit::fit_scheme(kind, &cfg)
}

pub fn solve_manufactured_with(
    case: &ManufacturedCase,
    scheme: &Scheme,
    n: usize,
    tol: f64,
    report: Option<FitReport>,
) -> Result<ManufacturedRun> {
    let grid = case.grid(n)?;
    let medium = case.medium(&grid)?;
    let fields = coefficient_fields(&grid, &medium, &PmlConfig::disabled())?;
    let rhs = case.rhs_samples(&grid);
    let exact_on_grid =
        move |m: usize, n: usize| case.exact(grid.x(m), grid.z(n));
    let sys = assemble(
        scheme,
        &grid,
        &fields,
        ClosurePolicy::TwoRingDirichlet,
        &DirichletData::Exact(&exact_on_grid),
        &SourceSpec::Samples(&rhs),
    )?;
    let sol = solve(&sys, tol)?;
    let exact = case.exact_field(&grid);
    let diff: Vec<Complex64> = sol
        .field
        .values
        .iter()
        .zip(exact.values.iter())
        .map(|(a, b)| a - b)
        .collect();
    Ok(ManufacturedRun {
        n,
        h: grid.h,
        error: cnorm(&diff),
        residual: sol.residual,
        field: sol.field,
        report,
    })
}
