use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("point ({pos}) penetrates the PML beyond its thickness along {axis}")]
    PmlGeometry { pos: f64, axis: &'static str },
    #[error("stretch factor undefined at omega = 0")]
    ZeroFrequency,
    #[error("stencil footprint out of range at node ({m}, {n})")]
    FootprintOutOfRange { m: usize, n: usize },
    #[error("degenerate dispersion denominator |D| = {d:.3e} at theta = {theta}, G = {g}")]
    DegenerateDenominator { theta: f64, g: f64, d: f64 },
    #[error("negative radicand N/D = {ratio:.3e} at theta = {theta}, G = {g} (evanescent numerical mode)")]
    EvanescentMode { theta: f64, g: f64, ratio: f64 },
    #[error("least-squares system is rank deficient (rank {rank} < {need})")]
    RankDeficient { rank: usize, need: usize },
    #[error("empty G interval after clipping: [{lo}, {hi}]")]
    EmptyInterval { lo: f64, hi: f64 },
    #[error("boundary closure requires Dirichlet data but none was supplied")]
    MissingBoundaryData,
    #[error("sparse factorization failed: {0}")]
    Factorization(String),
    #[error("solver residual {achieved:.3e} exceeds tolerance {tol:.3e}")]
    ResidualTooLarge { achieved: f64, tol: f64 },
    #[error("per-frequency solve failed at f = {freq} Hz: {source}")]
    FrequencySolve {
        freq: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
