//! Layered-velocity demonstration: monofrequency wavefields, PML decay
//! metrics, and time snapshots on a physical domain wrapped in PML.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::fit::{estimate_ig, FitConfig, FitReport};
use crate::grid::GridSpec;
use crate::linsys::{assemble, solve, ClosurePolicy, DirichletData, SourceSpec};
use crate::pml::{coefficient_fields, MediumModel, PmlConfig, PmlSides};
use crate::stencil::{Scheme, SchemeKind};
use crate::trace::SOURCE_AMPLITUDE;

/// Horizontally layered velocity model: `velocities[i]` applies below
/// `interfaces[i-1]` and above `interfaces[i]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayeredModel {
    /// Interface depths, strictly increasing.
    pub interfaces: Vec<f64>,
    /// One velocity per layer; `interfaces.len() + 1` entries.
    pub velocities: Vec<f64>,
}

impl LayeredModel {
    pub fn new(interfaces: Vec<f64>, velocities: Vec<f64>) -> Result<Self> {
        if velocities.len() != interfaces.len() + 1 {
            return Err(Error::InvalidParam(format!(
                "{} interfaces need {} velocities, got {}",
                interfaces.len(),
                interfaces.len() + 1,
                velocities.len()
            )));
        }
        if interfaces.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParam("interface depths must increase".into()));
        }
        if velocities.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::InvalidParam("layer velocities must be positive".into()));
        }
        Ok(Self { interfaces, velocities })
    }

    /// Default three-layer model.
    pub fn three_layer() -> Self {
        Self::new(vec![800.0, 1400.0], vec![2000.0, 2500.0, 3000.0]).unwrap()
    }

    pub fn velocity_at(&self, z: f64) -> f64 {
        let layer = self.interfaces.iter().filter(|&&d| z >= d).count();
        self.velocities[layer]
    }

    pub fn extremes(&self) -> (f64, f64) {
        let lo = self.velocities.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.velocities.iter().cloned().fold(0.0, f64::max);
        (lo, hi)
    }

    /// Sample onto a grid; the depth coordinate is clamped into
    /// `[z_clamp.0, z_clamp.1]` so PML padding extends the adjacent layer.
    pub fn sample(&self, grid: &GridSpec, z_clamp: (f64, f64)) -> Vec<f64> {
        let mut v = Vec::with_capacity(grid.len());
        for n in 0..grid.nz {
            let z = grid.z(n).clamp(z_clamp.0, z_clamp.1);
            for _ in 0..grid.nx {
                v.push(self.velocity_at(z));
            }
        }
        v
    }
}

/// Geometry of a physical domain padded with PML on all sides.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaddedDomain {
    /// Physical nodes per side (the domain spans `(n_phys - 1) * h`).
    pub nx_phys: usize,
    pub nz_phys: usize,
    pub h: f64,
    /// PML thickness; must be a whole number of cells.
    pub l_pml: f64,
    pub a0: f64,
    /// Peak frequency controlling the PML absorption profile.
    pub f_m: f64,
}

impl PaddedDomain {
    pub fn pml_cells(&self) -> Result<usize> {
        let cells = self.l_pml / self.h;
        if (cells - cells.round()).abs() > 1e-9 || cells < 3.0 {
            return Err(Error::InvalidParam(format!(
                "PML thickness {} must be at least 3 whole cells of {}",
                self.l_pml, self.h
            )));
        }
        Ok(cells.round() as usize)
    }

    /// Grid extended by the PML padding, physical origin at (0, 0).
    pub fn grid(&self) -> Result<GridSpec> {
        let c = self.pml_cells()?;
        GridSpec::new(
            self.nx_phys + 2 * c,
            self.nz_phys + 2 * c,
            self.h,
            1.0,
            (-(c as f64) * self.h, -(c as f64) * self.h),
        )
    }

    pub fn pml(&self) -> Result<PmlConfig> {
        PmlConfig::new(self.l_pml, self.a0, self.f_m, PmlSides::all())
    }

    pub fn physical_extent(&self) -> (f64, f64) {
        ((self.nx_phys - 1) as f64 * self.h, (self.nz_phys - 1) as f64 * self.h)
    }

    /// True if the node lies in the physical (non-PML) region.
    pub fn is_physical(&self, grid: &GridSpec, m: usize, n: usize) -> bool {
        let (ex, ez) = self.physical_extent();
        let (x, z) = (grid.x(m), grid.z(n));
        (0.0..=ex).contains(&x) && (0.0..=ez).contains(&z)
    }
}

pub struct MonoRun {
    pub field: Field,
    pub residual: f64,
    /// Ratio of the outermost non-eliminated ring amplitude to the peak
    /// physical-region amplitude; small means the PML absorbed the wave.
    pub pml_decay: f64,
    pub report: Option<FitReport>,
}

/// Ratio `max |p| on the outer ring / max |p| over the physical region`.
pub fn pml_decay_metric(field: &Field, domain: &PaddedDomain) -> f64 {
    let grid = &field.grid;
    let mut outer = 0.0f64;
    let mut interior = 0.0f64;
    for n in 0..grid.nz {
        for m in 0..grid.nx {
            let ring = m.min(n).min(grid.nx - 1 - m).min(grid.nz - 1 - n);
            let v = field.get(m, n).norm();
            if ring == 2 {
                outer = outer.max(v);
            }
            if domain.is_physical(grid, m, n) {
                interior = interior.max(v);
            }
        }
    }
    if interior > 0.0 {
        outer / interior
    } else {
        f64::INFINITY
    }
}

/// Solve one frequency through the layered model with a unit-wavelet point
/// source, refitting scheme parameters for the model's velocity band.
pub fn monofrequency(
    domain: &PaddedDomain,
    model: &LayeredModel,
    kind: SchemeKind,
    frequency: f64,
    source: (f64, f64),
    tol: f64,
) -> Result<MonoRun> {
    let grid = domain.grid()?;
    let (v_min, v_max) = model.extremes();
    let ig = estimate_ig(v_min, v_max, frequency, frequency, grid.h)?;
    let cfg = FitConfig::new(ig.ig, grid.gamma)?;
    let (scheme, report) = crate::fit::fit_scheme(kind, &cfg)?;
    let run = monofrequency_with(domain, model, &scheme, frequency, source, tol)?;
    Ok(MonoRun { report, ..run })
}

pub fn monofrequency_with(
    domain: &PaddedDomain,
    model: &LayeredModel,
    scheme: &Scheme,
    frequency: f64,
    source: (f64, f64),
    tol: f64,
) -> Result<MonoRun> {
    let grid = domain.grid()?;
    let (_, ez) = domain.physical_extent();
    let velocity = model.sample(&grid, (0.0, ez));
    let medium = MediumModel::from_velocity(&grid, velocity, frequency)?;
    let fields = coefficient_fields(&grid, &medium, &domain.pml()?)?;
    let sys = assemble(
        scheme,
        &grid,
        &fields,
        ClosurePolicy::TwoRingDirichlet,
        &DirichletData::Zero,
        &SourceSpec::Point {
            x: source.0,
            z: source.1,
            amplitude: Complex64::new(SOURCE_AMPLITUDE, 0.0),
        },
    )?;
    let sol = solve(&sys, tol)?;
    let decay = pml_decay_metric(&sol.field, domain);
    Ok(MonoRun { field: sol.field, residual: sol.residual, pml_decay: decay, report: None })
}
