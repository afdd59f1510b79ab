//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors arising from exact arithmetic and model construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Division by zero in the cyclotomic field.
    #[error("division by zero in Q(zeta_{p})")]
    DivisionByZero {
        /// The prime of the ambient field.
        p: u32,
    },

    /// Galois automorphism index that is not invertible modulo p.
    #[error("automorphism index {j} is not invertible modulo {p}")]
    BadAutomorphism {
        /// Requested index.
        j: i64,
        /// The prime of the ambient field.
        p: u32,
    },

    /// The p-th power test ran out of precision before deciding.
    #[error("p-th power test inconclusive at the {ceiling_bits}-bit precision ceiling")]
    Inconclusive {
        /// Ceiling that was in force when the test gave up.
        ceiling_bits: u32,
    },

    /// Inversion of a non-unit in a Kummer algebra.
    #[error("element is not a unit (its norm vanishes)")]
    NonUnit,

    /// Parameter value at which the relevant family degenerates.
    #[error("degenerate parameter: {reason}")]
    Degenerate {
        /// What degenerated, with the offending value.
        reason: String,
    },

    /// The zero vector does not define a projective point.
    #[error("projective point needs a nonzero coordinate")]
    ZeroPoint,

    /// Malformed input: bad syntax, wrong length, out-of-range value.
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
