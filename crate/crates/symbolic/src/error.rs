use thiserror::Error;

/// Parse failure with a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("minor size {k} out of range for a {rows}x{cols} matrix")]
    MinorSizeOutOfRange { k: usize, rows: usize, cols: usize },
    #[error("ring mismatch: expected {expected} variables, found {found}")]
    RingMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a complex: composite of maps at position {position} is nonzero")]
    NotAComplex { position: usize },
    #[error("too many variables: {0} (at most {max} supported)", max = crate::monomial::MAX_VARS)]
    TooManyVariables(usize),
    #[error("{0}")]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
