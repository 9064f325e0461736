use thiserror::Error;

use crate::numeric::NumericMode;

pub type Result<T> = std::result::Result<T, GwlError>;

#[derive(Debug, Error)]
pub enum GwlError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0} (expected 1, 2 or 3)")]
    UnsupportedDimension(usize),

    #[error("numeric mode mismatch: {0} vs {1}")]
    ModeMismatch(NumericMode, NumericMode),

    #[error("radial cutoff must be positive")]
    NonPositiveCutoff,

    #[error("matrix is not orthogonal (residual {0:e})")]
    NonOrthogonal(f64),

    #[error("determinant must be +1 for a rotation witness")]
    NotARotation,

    #[error("permutation is not a bijection on {0} nodes")]
    InvalidPermutation(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("oracle cap exceeded: {n} nodes > cap {cap}")]
    OracleCapExceeded { n: usize, cap: usize },

    #[error("body order must be at least 2, got {0}")]
    InvalidBodyOrder(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("empty input")]
    EmptyInput,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for GwlError {
    fn from(e: serde_json::Error) -> Self {
        GwlError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
