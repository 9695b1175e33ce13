use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HbError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range (truncation {trunc})")]
    OutOfRange { index: usize, trunc: usize },

    #[error("rational symbol has a vanishing denominator constant term")]
    ZeroDenominator,

    #[error("boundary sample {index} is not finite")]
    NonFiniteSample { index: usize },

    #[error("grid size {0} must be a power of two and at least 4T")]
    BadGrid(usize),

    #[error("Gram matrix of size {0} is not numerically positive definite")]
    NotPositiveDefinite(usize),

    #[error("numeric overflow: {0}")]
    Overflow(String),

    #[error("row {row}: expected {expected} entries, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: cannot parse {token:?} as a complex number")]
    Parse { line: usize, token: String },

    #[error("custom summability matrix has {available} rows, row {requested} requested")]
    MissingRow { requested: usize, available: usize },

    #[error(transparent)]
    Io(#[from] IoError),
}

/// `std::io::Error` is neither `Clone` nor `PartialEq`; keep its rendering.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{0}")]
pub struct IoError(pub String);

impl From<std::io::Error> for HbError {
    fn from(e: std::io::Error) -> Self {
        HbError::Io(IoError(e.to_string()))
    }
}

pub type Result<T> = std::result::Result<T, HbError>;
