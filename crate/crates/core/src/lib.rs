//! Fourth-order point-weighting finite-difference schemes for the 2-D
//! Helmholtz equation with PML, with dispersion-minimizing parameter
//! selection, sparse direct solves, and the verification experiments built on
//! top of them.

pub mod convergence;
pub mod dispersion;
pub mod error;
pub mod field;
pub mod fit;
pub mod grid;
pub mod layered;
pub mod linsys;
pub mod manufactured;
pub mod pml;
pub mod special;
pub mod stencil;
pub mod trace;
pub mod wavelet;

pub use error::{Error, Result};
pub use field::{cnorm, Field};
pub use fit::{estimate_ig, fit_scheme, FitConfig, FitReport, IgEstimate};
pub use grid::GridSpec;
pub use linsys::{
    assemble, solve, ClosurePolicy, DirichletData, SourceSpec, SparseSystem,
    DEFAULT_SOLVER_TOL,
};
pub use pml::{coefficient_fields, CoefficientFields, MediumModel, PmlConfig, PmlSides};
pub use stencil::{Scheme, SchemeKind, SchemeParams17, SchemeParams25, Stencil};

pub use num_complex::Complex64;
