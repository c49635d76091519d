use thiserror::Error;

/// Errors produced by the spectral calculus.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice dimension must be at least 1")]
    ZeroDimension,
    #[error("lattice with n = {n}, radius = {radius} is too large for this platform")]
    LatticeTooLarge { n: usize, radius: usize },
    #[error("multi-index {index:?} lies outside the lattice of radius {radius}")]
    IndexOutsideLattice { index: Vec<i64>, radius: usize },
    #[error("multi-index {index:?} has {got} components, expected {expected}")]
    IndexDimension {
        index: Vec<i64>,
        got: usize,
        expected: usize,
    },
    #[error("fields live on different lattices ({left} vs {right})")]
    LatticeMismatch { left: String, right: String },
    #[error("grid of {points} points per axis aliases a lattice of radius {radius}; need at least {required}")]
    GridTooCoarse {
        points: usize,
        radius: usize,
        required: usize,
    },
    #[error("grid dimension {grid} does not match lattice dimension {lattice}")]
    DimensionMismatch { grid: usize, lattice: usize },
    #[error("invalid integrability exponent p = {p}: {reason}")]
    InvalidExponent { p: f64, reason: &'static str },
    #[error("smoothness index must be finite and nonnegative here, got {0}")]
    InvalidSmoothness(f64),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("test function has zero norm in the source space")]
    ZeroNormTestFunction,
    #[error("test family is empty")]
    EmptyFamily,
    #[error("test family must contain the constant function")]
    FamilyWithoutConstant,
    #[error("lower-bound certificate {certificate} exceeds multiplier norm {norm}")]
    CertificateViolated { certificate: f64, norm: f64 },
    #[error("power iteration did not converge after {iterations} iterations (relative change {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("index hypotheses fail: {0}")]
    HypothesisFailed(String),
    #[error("the multiplier is the zero field")]
    ZeroField,
    #[error("duplicate coefficient entry for index {0:?}")]
    DuplicateIndex(Vec<i64>),
    #[error("invalid input: {0}")]
    Format(String),
    #[error("{op} requires p = q = 2, got p = {p}, q = {q}")]
    RequiresHilbert { op: &'static str, p: f64, q: f64 },
    #[error("empty parameter grid")]
    EmptyGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
