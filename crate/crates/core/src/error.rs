use crate::exact_arith::{Integer, Rational};

/// Errors raised across the library.
///
/// Parameter errors (`BadParameter`, `NotPrime`, `OddGenus`, `FieldTooLarge`)
/// are precondition failures; `NonIntegral` and `IdentityViolation` indicate
/// that a formula produced something that cannot be a cardinality.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{what} has size {size}, exceeding the enumeration limit {limit}")]
    FieldTooLarge {
        what: String,
        size: Integer,
        limit: u64,
    },

    #[error("operands belong to different fields ({left} vs {right})")]
    MixedFields { left: String, right: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("F_{order} is not presented as a quadratic extension (odd degree {degree})")]
    NotQuadraticExtension { order: u64, degree: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("expected an integer, found {0}")]
    NonIntegral(Rational),

    #[error("Lambda* is only defined for even genus, got g = {0}")]
    OddGenus(u32),

    #[error("identity {name} violated: {lhs} != {rhs}")]
    IdentityViolation {
        name: String,
        lhs: String,
        rhs: String,
    },
}

impl Error {
    pub(crate) fn bad(msg: impl Into<String>) -> Self {
        Error::BadParameter(msg.into())
    }

    pub(crate) fn too_large(what: impl Into<String>, size: impl Into<Integer>, limit: u64) -> Self {
        Error::FieldTooLarge {
            what: what.into(),
            size: size.into(),
            limit,
        }
    }

    /// True for errors caused by invalid user input rather than by a failed check.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::FieldTooLarge { .. }
                | Error::BadParameter(_)
                | Error::OddGenus(_)
                | Error::NotQuadraticExtension { .. }
                | Error::DimensionMismatch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
