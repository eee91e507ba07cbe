use thiserror::Error;

/// Errors produced by the numeric and ingestion layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sample too small: need at least {needed} observations, got {got}")]
    SampleTooSmall { needed: usize, got: usize },

    #[error("invalid observation at index {index}: {reason}")]
    InvalidObservation { index: usize, reason: String },

    #[error(
        "hypothesized value {delta0} is not strictly inside the pseudo-value range ({min}, {max})"
    )]
    HullViolation { delta0: f64, min: f64, max: f64 },

    #[error(
        "Lagrange solve did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("numerical integration failed to reach tolerance {tolerance:e} (estimate {estimate})")]
    IntegrationFailure { tolerance: f64, estimate: f64 },

    #[error("parse error at row {row}, column `{column}`: {reason}")]
    Parse {
        row: usize,
        column: String,
        reason: String,
    },

    #[error("unmapped cause label `{0}`")]
    UnmappedLabel(String),

    #[error("negative time {value} at row {row}")]
    NegativeTime { row: usize, value: f64 },

    #[error("label `{0}` appears in more than one mapping set")]
    OverlappingLabel(String),

    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
