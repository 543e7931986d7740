use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unsupported Bessel order {0}")]
    UnsupportedOrder(f64),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("point outside the periodic box: {0}")]
    OutOfDomain(String),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("not resolvable at this resolution: {0}")]
    Unresolvable(String),
    #[error("no scaling prediction for {0}")]
    NoPrediction(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("exponent pair outside the admissible region: {0}")]
    RegionViolation(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
