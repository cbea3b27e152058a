use thiserror::Error;

/// Errors raised by the algebraic operations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("value {value} is outside a domain of size {size}")]
    ValueOutOfRange { value: usize, size: usize },

    #[error("domain mismatch: {left} vs {right}")]
    DomainMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("sequence is not decreasing at index {index}")]
    DecreasingViolation { index: usize },

    #[error("permutation does not have finite support within 0..{len}")]
    NotFiniteSupport { len: usize },

    #[error("matrix column {column} is not in the relation")]
    ColumnNotInRelation { column: usize },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
