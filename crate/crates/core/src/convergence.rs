//! Grid-refinement studies against the manufactured solution.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::manufactured::{solve_manufactured, ManufacturedCase};
use crate::stencil::SchemeKind;

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    /// C-norm error against the exact solution.
    pub error: f64,
    /// Error ratio against the previous (coarser) row.
    pub ratio: Option<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStudy {
    pub scheme: String,
    pub k0: f64,
    pub theta: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceStudy {
    /// Observed order between consecutive rows: `log(ratio) / log(h1/h2)`.
    pub fn observed_orders(&self) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|w| (w[0].error / w[1].error).ln() / (w[0].h / w[1].h).ln())
            .collect()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "n,h,error,ratio,residual")?;
        for r in &self.rows {
            let ratio = r.ratio.map(|v| format!("{v:.6e}")).unwrap_or_default();
            writeln!(f, "{},{:.17e},{:.6e},{},{:.3e}", r.n, r.h, r.error, ratio, r.residual)?;
        }
        Ok(())
    }
}

/// Run the manufactured problem over a list of grid sizes, refitting the
/// scheme parameters for each grid's `I_G`.
pub fn convergence_study(
    case: &ManufacturedCase,
    kind: SchemeKind,
    ns: &[usize],
    tol: f64,
) -> Result<ConvergenceStudy> {
    let runs: Result<Vec<_>> =
        ns.par_iter().map(|&n| solve_manufactured(case, kind, n, tol)).collect();
    let runs = runs?;
    let mut rows = Vec::with_capacity(runs.len());
    for (i, run) in runs.iter().enumerate() {
        let ratio = (i > 0).then(|| runs[i - 1].error / run.error);
        rows.push(ConvergenceRow {
            n: run.n,
            h: run.h,
            error: run.error,
            ratio,
            residual: run.residual,
        });
    }
    Ok(ConvergenceStudy {
        scheme: kind.name().into(),
        k0: case.k0,
        theta: case.theta,
        rows,
    })
}
