use thiserror::Error;

use crate::field::FieldSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },

    #[error("{0} is not a prime (characteristic must be 0 or prime)")]
    NotPrime(u64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("shape mismatch: {left}x{left} vs {right}x{right}")]
    ShapeMismatch { left: usize, right: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("characteristic {characteristic} divides n = {n}")]
    CharacteristicDividesN { n: i64, characteristic: u64 },

    #[error("matrix is not invertible over the Laurent ring: determinant {0}")]
    NotInvertible(String),

    #[error("twist window too small (bound {bound}): {reason}")]
    WindowTooSmall { bound: i64, reason: String },

    #[error("gluing conditions violated for r = {r}: {reason}")]
    GluingFailed { r: usize, reason: String },

    #[error("no unique solution supplied for r = {0}")]
    MissingSolution(usize),

    #[error("A_{r} is singular over Q for n = {n}, k = {k}")]
    UnexpectedSingular { n: i64, k: i64, r: i64 },

    #[error("certificate failed verification: {0}")]
    CertificateRejected(String),

    #[error("parse error: {0}")]
    Parse(String),
}
