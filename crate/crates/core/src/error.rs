use thiserror::Error;

/// Errors raised by the disk toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("point outside the open unit disk (|z| = {0})")]
    OutsideDisk(f64),
    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },
    #[error("expected real-valued data")]
    ComplexInput,
    #[error("weight must be strictly positive, found {value} at index {index}")]
    NonPositive { index: usize, value: f64 },
    #[error("need at least {needed} radial nodes, found {found}")]
    InsufficientRadii { needed: usize, found: usize },
    #[error("truncation level must lie in (-1, 0), got {0}")]
    InvalidLevel(f64),
    #[error("no admissible truncation level: {0}")]
    NoAdmissibleLevel(String),
    #[error("Riesz density negative: minimum {min:e} at ring {ring}, angle index {angle}")]
    NotSubharmonic { min: f64, ring: usize, angle: usize },
    #[error("level {0} is not a regular value: {1}")]
    NotRegular(f64, String),
    #[error("level set for c = {0} reaches the boundary row")]
    TouchesBoundary(f64),
    #[error("Riesz density is not harmonic: {0}")]
    NotHarmonic(String),
    #[error("monotonicity violated at index {index}: {detail}")]
    NotMonotone { index: usize, detail: String },
    #[error("boundary samples are not analytic: negative-frequency mass {0:e}")]
    NotAnalytic(f64),
    #[error("function is not outer: residual {0:e}")]
    NotOuter(f64),
    #[error("function has a zero inside the disk (winding number {0})")]
    ZerosInDisk(i64),
    #[error("f(0) = 0")]
    VanishesAtOrigin,
    #[error("branch failure: {0}")]
    Branch(String),
    #[error("too many excluded samples: {excluded} of {total}")]
    TooManyExclusions { excluded: usize, total: usize },
    #[error("exponents not conjugate: p = {p}, q = {q}")]
    NotConjugate { p: f64, q: f64 },
    #[error("exponent out of range: {0}")]
    InvalidExponent(f64),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, DiscError>;
