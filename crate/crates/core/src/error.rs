//! Crate-wide error type.

use std::fmt;

/// Errors surfaced by the TWDP library.
///
/// Estimator failure modes that have a defined statistical meaning
/// (singular moment denominator, no positive cubic root, clamping) are
/// *not* errors; they are reported through
/// [`crate::estimators::EstimateStatus`]. `Error` covers contract
/// violations and numerical breakdowns.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside its documented domain.
    Domain(String),
    /// A matrix or denominator is singular / too ill-conditioned to use.
    Singular(String),
    /// A quadrature or iteration failed to reach its tolerance.
    Numerical(String),
    /// The requested quantity is not defined (or not reliable) at an
    /// identifiability boundary such as K = 0 or Gamma in {0, 1}.
    Boundary(String),
    /// File I/O failure, annotated with the path involved.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Singular(msg) => write!(f, "singular: {msg}"),
            Error::Numerical(msg) => write!(f, "numerical error: {msg}"),
            Error::Boundary(msg) => write!(f, "boundary error: {msg}"),
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
