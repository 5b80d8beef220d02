use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("insufficient points: need at least {needed}, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("multiplicity exceeded at cube index {index}")]
    MultiplicityExceeded { index: usize },
    #[error("point budget exceeded: {needed} points requested, cap is {cap}")]
    PointBudgetExceeded { needed: u128, cap: usize },
    #[error("under-resolved quadrature: {points} points per axis, at least {required} required")]
    UnderResolved { points: usize, required: usize },
    #[error("rate not negative: tau = {tau} must exceed gamma0 = {gamma0}")]
    RateNotNegative { tau: f64, gamma0: f64 },
    #[error("norm diverges: {0}")]
    NormDiverges(String),
    #[error("cubes not disjoint: centers {0} and {1}")]
    NotDisjoint(usize, usize),
    #[error("delta*sigma too large: {0}")]
    DeltaSigmaTooLarge(String),
    #[error("net not delta-covering: {0}")]
    NotCovering(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
