use thiserror::Error;

use crate::exactlin::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot parse scalar {input:?} over {field}")]
    ParseScalar { input: String, field: Field },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("algebra mismatch: operands live on different algebras")]
    AlgebraMismatch,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("reconstruction mismatch: {0}")]
    Reconstruction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
