//! Global sparse-system assembly and the direct solver.
//!
//! Unknowns are ordered row-major (z-line major). The 5-wide fourth-order
//! footprint cannot reach the outermost nodes, so the default closure
//! eliminates the outer two node rings as known Dirichlet data (exact values
//! for manufactured runs, zeros behind a PML).

use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::GridSpec;
use crate::pml::CoefficientFields;
use crate::stencil::{conventional5_stencil, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosurePolicy {
    /// Outer two rings are known data; every unknown row carries the full
    /// scheme stencil. Default.
    TwoRingDirichlet,
    /// Only the outermost ring is known; the adjacent ring falls back to the
    /// conventional 5-point row (reduces boundary-local order).
    Fallback5p,
}

/// Known values on eliminated nodes.
pub enum DirichletData<'a> {
    Zero,
    /// Node-indexed exact values.
    Exact(&'a dyn Fn(usize, usize) -> Complex64),
}

pub enum SourceSpec<'a> {
    None,
    /// Delta source at the nearest grid node, scaled by 1/(h^2 gamma).
    Point { x: f64, z: f64, amplitude: Complex64 },
    /// Sampled right-hand side g on the full grid, row-major.
    Samples(&'a [Complex64]),
}

/// Per-node closure decision: which nodes are eliminated and with what value.
pub struct Closure {
    pub eliminated: Vec<bool>,
    pub values: Vec<Complex64>,
    pub fallback_ring: Option<usize>,
}

fn ring(grid: &GridSpec, m: usize, n: usize) -> usize {
    m.min(n).min(grid.nx - 1 - m).min(grid.nz - 1 - n)
}

/// Resolve a closure policy into eliminated nodes and their known values.
pub fn apply_boundary(policy: ClosurePolicy, grid: &GridSpec, data: &DirichletData) -> Closure {
    let cut = match policy {
        ClosurePolicy::TwoRingDirichlet => 2,
        ClosurePolicy::Fallback5p => 1,
    };
    let mut eliminated = vec![false; grid.len()];
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    for n in 0..grid.nz {
        for m in 0..grid.nx {
            if ring(grid, m, n) < cut {
                let idx = grid.index(m, n);
                eliminated[idx] = true;
                if let DirichletData::Exact(f) = data {
                    values[idx] = f(m, n);
                }
            }
        }
    }
    let fallback_ring = match policy {
        ClosurePolicy::TwoRingDirichlet => None,
        ClosurePolicy::Fallback5p => Some(1),
    };
    Closure { eliminated, values, fallback_ring }
}

pub struct SparseSystem {
    pub grid: GridSpec,
    pub dim: usize,
    triplets: Vec<(usize, usize, Complex64)>,
    pub rhs: Vec<Complex64>,
    index_of: Vec<Option<usize>>,
    nodes: Vec<(usize, usize)>,
    boundary: Vec<Complex64>,
}

impl SparseSystem {
    pub fn nnz(&self) -> usize {
        self.triplets.len()
    }

    pub fn unknown_index(&self, m: usize, n: usize) -> Option<usize> {
        self.index_of[self.grid.index(m, n)]
    }

    pub fn unknown_nodes(&self) -> &[(usize, usize)] {
        &self.nodes
    }

    pub fn triplets(&self) -> &[(usize, usize, Complex64)] {
        &self.triplets
    }
}

/// Assemble the global system for a scheme over the grid.
pub fn assemble(
    scheme: &Scheme,
    grid: &GridSpec,
    fields: &CoefficientFields,
    policy: ClosurePolicy,
    data: &DirichletData,
    source: &SourceSpec,
) -> Result<SparseSystem> {
    if let SourceSpec::Samples(g) = source {
        if g.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "source samples {} do not match grid {}",
                g.len(),
                grid.len()
            )));
        }
    }
    let closure = apply_boundary(policy, grid, data);
    let mut index_of = vec![None; grid.len()];
    let mut nodes = Vec::new();
    for n in 0..grid.nz {
        for m in 0..grid.nx {
            let idx = grid.index(m, n);
            if !closure.eliminated[idx] {
                index_of[idx] = Some(nodes.len());
                nodes.push((m, n));
            }
        }
    }
    let dim = nodes.len();
    let mut triplets = Vec::new();
    let mut rhs = vec![Complex64::new(0.0, 0.0); dim];

    for (row, &(m, n)) in nodes.iter().enumerate() {
        let st = if closure.fallback_ring == Some(ring(grid, m, n)) {
            conventional5_stencil((m, n), fields, grid)?
        } else {
            scheme.stencil((m, n), fields, grid)?
        };
        if let SourceSpec::Samples(g) = source {
            rhs[row] = g[grid.index(m, n)];
        }
        for (di, dj, w) in st.entries() {
            let tm = (m as i32 + di) as usize;
            let tn = (n as i32 + dj) as usize;
            let tidx = grid.index(tm, tn);
            match index_of[tidx] {
                Some(col) => triplets.push((row, col, w)),
                None => rhs[row] -= w * closure.values[tidx],
            }
        }
    }

    if let SourceSpec::Point { x, z, amplitude } = source {
        let (m, n) = grid.nearest_node(*x, *z);
        let row = index_of[grid.index(m, n)].ok_or_else(|| {
            Error::Domain(format!("point source at node ({m}, {n}) falls on eliminated boundary"))
        })?;
        rhs[row] += amplitude / (grid.h * grid.h * grid.gamma);
    }

    Ok(SparseSystem {
        grid: *grid,
        dim,
        triplets,
        rhs,
        index_of,
        nodes,
        boundary: closure.values,
    })
}

/// Direct sparse-LU solve of `A x = b`; returns the solution and the achieved
/// relative residual.
pub fn solve_raw(
    dim: usize,
    triplets: &[(usize, usize, Complex64)],
    rhs: &[Complex64],
) -> Result<(Vec<Complex64>, f64)> {
    let entries: Vec<Triplet<usize, usize, c64>> = triplets
        .iter()
        .map(|&(r, c, v)| Triplet::new(r, c, c64::new(v.re, v.im)))
        .collect();
    let a = SparseColMat::<usize, c64>::try_new_from_triplets(dim, dim, &entries)
        .map_err(|e| Error::Factorization(format!("triplet assembly: {e:?}")))?;
    let lu = a.sp_lu().map_err(|e| Error::Factorization(format!("{e:?}")))?;
    let mut b = Mat::<c64>::zeros(dim, 1);
    for (i, v) in rhs.iter().enumerate() {
        b[(i, 0)] = c64::new(v.re, v.im);
    }
    let x = lu.solve(&b);
    let sol: Vec<Complex64> = (0..dim).map(|i| Complex64::new(x[(i, 0)].re, x[(i, 0)].im)).collect();

    let mut ax = vec![Complex64::new(0.0, 0.0); dim];
    for &(r, c, v) in triplets {
        ax[r] += v * sol[c];
    }
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for i in 0..dim {
        num += (ax[i] - rhs[i]).norm_sqr();
        den += rhs[i].norm_sqr();
    }
    let residual = if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };
    Ok((sol, residual))
}

pub struct Solution {
    /// Full-grid field with eliminated nodes carrying their Dirichlet values.
    pub field: Field,
    /// Relative residual achieved by the solver.
    pub residual: f64,
    /// Solution restricted to the unknowns, in row order.
    pub interior: Vec<Complex64>,
}

pub const DEFAULT_SOLVER_TOL: f64 = 1e-10;

pub fn solve(sys: &SparseSystem, tol: f64) -> Result<Solution> {
    let (x, residual) = solve_raw(sys.dim, &sys.triplets, &sys.rhs)?;
    if !(residual <= tol) {
        return Err(Error::ResidualTooLarge { achieved: residual, tol });
    }
    let mut field = Field { grid: sys.grid, values: sys.boundary.clone() };
    for (row, &(m, n)) in sys.nodes.iter().enumerate() {
        field.set(m, n, x[row]);
    }
    Ok(Solution { field, residual, interior: x })
}
