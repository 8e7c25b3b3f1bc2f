use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, got {got} ({context})")]
    ShapeMismatch {
        expected: String,
        got: String,
        context: &'static str,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("polar undefined: origin is not interior ({0})")]
    PolarUndefined(String),

    #[error("Lp surface measure undefined: {0}")]
    LpMeasureUndefined(String),

    #[error("not a star body with respect to the origin: {0}")]
    NotStarBody(String),

    #[error("representation does not support this operation: {0}")]
    Unsupported(String),

    #[error("did not converge: {0}")]
    NoConvergence(String),

    #[error("sampler too inefficient: {0}")]
    SamplerInefficient(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
