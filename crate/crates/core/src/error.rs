use thiserror::Error;

/// Errors raised by lattice, solver and manifold operations.
///
/// Every variant names the contract that was violated so front ends can
/// report it verbatim.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: lattice has rank {expected}, vector has length {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("gram matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("gram matrix is not unimodular: determinant is {det}")]
    NotUnimodular { det: String },

    #[error("invariant violation: unimodular form reduced to a degenerate one")]
    Degenerate,

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("vector is not characteristic")]
    NotCharacteristic,

    #[error("target square {h} is not congruent to the signature {tau} modulo 8")]
    SquareCongruence { h: i64, tau: i64 },

    #[error("zero vector has no primitive part")]
    ZeroVector,

    #[error("vector has divisibility {0}, expected a primitive vector")]
    NotPrimitive(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("certificate rejected: {0}")]
    CertificateRejected(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
