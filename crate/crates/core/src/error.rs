//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different fields")]
    MixedField,

    #[error("division by zero")]
    DivisionByZero,

    #[error("operation requires characteristic different from 2")]
    CharacteristicTwo,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("cannot parse scalar: {0:?}")]
    ParseScalar(String),

    #[error("operation requires a finite field")]
    InfiniteField,

    #[error("enumeration would scan {needed} canonical matrices, cap is {cap}")]
    EnumerationCapExceeded { needed: u128, cap: u128 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("subspace is not a basic ideal")]
    NotBasicIdeal,

    #[error("subspace is not an ideal")]
    NotIdeal,

    #[error("subspace is not one-dimensional")]
    NotOneDimensional,

    #[error("algebra is not solvable")]
    NotSolvable,

    #[error("algebra has wrong dimension for this operation: {0}")]
    WrongDimension(usize),

    #[error("invalid family parameters: {0}")]
    InvalidFamilySpec(String),

    #[error("random profile unsatisfiable after {retries} retries")]
    UnsatisfiableProfile { retries: usize },

    #[error("structural precondition failed: {0}")]
    StructuralPreconditionFailed(String),

    #[error("subalgebra enumeration over an infinite field is unsupported")]
    UnsupportedOverInfiniteField,

    #[error("dependency coefficients are not squares in the field; rescaling unavailable")]
    NormalFormScalingUnavailable,

    #[error("lattice operation escapes the node set: {0}")]
    JoinEscapesSet(String),
}
