use thiserror::Error;

/// Errors produced by grid construction, evaluation and the study harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid node (level {level}, index {index})")]
    InvalidNode { level: u32, index: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("surrogate model has no nodes")]
    EmptyModel,

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("model evaluation failed at {point:?}: {message}")]
    Evaluation { point: Vec<f64>, message: String },

    #[error("spline query {t} outside interval [{lo}, {hi}]")]
    OutsideInterval { t: f64, lo: f64, hi: f64 },

    #[error("spline construction failed: {0}")]
    Spline(String),

    #[error("negative variance {variance:e} beyond rounding tolerance {tolerance:e}")]
    NegativeVariance { variance: f64, tolerance: f64 },

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("unknown benchmark `{0}`")]
    UnknownBenchmark(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidNode { .. } => "invalid_node",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::EmptyModel => "empty_model",
            Error::ContractViolation(_) => "contract_violation",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Evaluation { .. } => "evaluation",
            Error::OutsideInterval { .. } => "outside_interval",
            Error::Spline(_) => "spline",
            Error::NegativeVariance { .. } => "negative_variance",
            Error::SingularSystem(_) => "singular_system",
            Error::UnknownBenchmark(_) => "unknown_benchmark",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
