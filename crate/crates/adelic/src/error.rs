//! The crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("operands live over different primes: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("invalid residue {residue} for prime {p}")]
    InvalidResidue { residue: u64, p: u64 },
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("adele operands live over different number fields")]
    FieldMismatch,
    #[error("divisor is not a unit adele: {0}")]
    NonUnitDivisor(String),
    #[error("group descriptor is not fertile: {0}")]
    NotFertile(String),
    #[error("descriptor has no concrete matrix model: {0}")]
    UnsupportedDescriptor(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name, used by the CLI error object.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::PrimeMismatch(_, _) => "PrimeMismatch",
            Error::DivisionByZero => "DivisionByZero",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::InvalidResidue { .. } => "InvalidResidue",
            Error::DomainViolation(_) => "DomainViolation",
            Error::InvalidPolynomial(_) => "InvalidPolynomial",
            Error::Reducible(_) => "Reducible",
            Error::Unsupported(_) => "Unsupported",
            Error::FieldMismatch => "FieldMismatch",
            Error::NonUnitDivisor(_) => "NonUnitDivisor",
            Error::NotFertile(_) => "NotFertile",
            Error::UnsupportedDescriptor(_) => "UnsupportedDescriptor",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
