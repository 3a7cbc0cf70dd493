use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("symbol `{0}` cannot be evaluated: no closed form and no summable decay")]
    Unevaluable(String),

    #[error("operation requires an analytic symbol, but `{name}` has coefficient at index {index}")]
    NonAnalytic { name: String, index: i64 },

    #[error("unsupported decay for {op}: {detail}")]
    UnsupportedDecay { op: &'static str, detail: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("missing witness: {0}")]
    MissingWitness(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
