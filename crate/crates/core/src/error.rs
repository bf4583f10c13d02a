use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not row-stochastic: row {row} sums to {sum}")]
    NotStochastic { row: usize, sum: String },
    #[error("kernel of T - I has dimension {0}, expected 1")]
    KernelDimension(usize),
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("stationary vector sums to zero and cannot be normalized")]
    ZeroMass,
    #[error("series has a zero constant term and is not invertible")]
    NonInvertibleSeries,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} has no square root in this scalar mode")]
    NotRepresentable(String),
    #[error("index {index} out of range for width {width}")]
    IndexOutOfRange { index: i64, width: usize },
    #[error("{states} states exceed the configured cap of {cap}")]
    SizeCap { states: u128, cap: u128 },
    #[error("invalid gas parameters: {0}")]
    InvalidParams(String),
    #[error("source set is not free: {0}")]
    NotFree(String),
    #[error("source sets overlap")]
    OverlappingSources,
    #[error("recursion exceeded depth {0}")]
    RecursionGuard(usize),
    #[error("parameters outside the convergence region: {0}")]
    OutsideConvergence(String),
    #[error("missing variable {0}")]
    MissingVariable(String),
    #[error("inconsistent sizes: {0}")]
    InconsistentSizes(String),
    #[error("unknown {what}: {name}")]
    Unknown { what: &'static str, name: String },
    #[error("cross products V^x H^y are not all zero: {0}")]
    NotOrthogonal(String),
    #[error("corner block does not stabilize: {0}")]
    NonStabilizing(String),
    #[error("independent computations disagree: {0}")]
    OracleMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
