use std::time::Duration;

/// Errors raised by the active-learning engine and its supporting modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty pool")]
    EmptyPool,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite value at component {0}")]
    NonFinite(usize),
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("no labeled samples")]
    NoLabeledSamples,
    #[error("pool exhausted")]
    PoolExhausted,
    #[error("duplicate pool point at index {0}")]
    DuplicatePoint(usize),
    #[error("pool index {0} already consumed")]
    AlreadyConsumed(usize),
    #[error("pool index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("no point satisfying the known constraints was found")]
    NoFeasiblePoint,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("predictor has not been fitted")]
    NotFitted,
    #[error("oracle protocol error: {message} (payload: {payload:?})")]
    Protocol { message: String, payload: String },
    #[error("oracle did not answer within {0:?}")]
    Timeout(Duration),
    #[error("csv error at row {row}, column {column:?}: {message}")]
    Csv {
        row: usize,
        column: String,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn protocol(msg: impl Into<String>, payload: impl Into<String>) -> Self {
        Error::Protocol {
            message: msg.into(),
            payload: payload.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
