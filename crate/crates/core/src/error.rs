//! Error type shared by all modules.

use std::fmt;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input contained a NaN or infinite component.
    NonFinite,
    /// A numeric parameter was outside its valid range.
    InvalidParameter(String),
    /// A coefficient vector was identically zero where a nonzero one is required.
    ZeroCoefficient,
    /// Vector or matrix dimensions do not agree.
    DimensionMismatch { expected: usize, got: usize },
    /// Exhaustive enumeration would visit more candidates than the guard allows.
    EnumerationTooLarge { estimate: u128, limit: u128 },
    /// A search produced no admissible nonzero candidate.
    SearchFailure,
    /// A floating-point decomposition failed (e.g. Cholesky on a non-PD matrix).
    Numeric(String),
    /// The prime does not define the requested finite field.
    InvalidField(String),
    /// A message symbol was outside its field's canonical range.
    InvalidSymbol(String),
    /// Two equation estimates for different coefficient vectors were compared.
    InvalidComparison,
    /// An experiment configuration was rejected.
    Config(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite => write!(f, "input has non-finite components"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::ZeroCoefficient => write!(f, "coefficient vector must be nonzero"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::EnumerationTooLarge { estimate, limit } => write!(
                f,
                "enumeration too large: ~{estimate} candidates exceeds limit {limit}"
            ),
            Error::SearchFailure => {
                write!(f, "search found no admissible nonzero candidate (raise alpha_max)")
            }
            Error::Numeric(msg) => write!(f, "numeric failure: {msg}"),
            Error::InvalidField(msg) => write!(f, "invalid field: {msg}"),
            Error::InvalidSymbol(msg) => write!(f, "invalid symbol: {msg}"),
            Error::InvalidComparison => {
                write!(f, "equation estimates target different coefficient vectors")
            }
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
