use jumploci_symbolic::{AlgebraError, ParseError};
use thiserror::Error;

use crate::cdga::Violation;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("CDGA fails validation ({} violations)", .0.len())]
    InvalidCdga(Vec<Violation>),
    #[error("element is not a cocycle: d(a) != 0")]
    NotACocycle,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("size bound exceeded: {what} is {size}, bound {bound}")]
    SizeBound { what: String, size: usize, bound: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("arrangement is not unimodular; failing rows {witness:?} (run the unimodularity check)")]
    NotUnimodular { witness: Vec<usize> },
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("mismatch with reference data: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
