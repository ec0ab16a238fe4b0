//! Prime-field scalars and dense univariate polynomials.

mod field;
mod poly;

pub use field::{is_prime, Field, FieldElement, DEFAULT_MODULUS};
pub use poly::{interpolate, lagrange_basis, vanishing_poly, Polynomial};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,
    #[error("duplicate interpolation abscissa {0}")]
    DuplicateAbscissa(u64),
    #[error("interpolation needs at least one point")]
    NoPoints,
    #[error("cannot parse field element {0:?}")]
    Parse(String),
    #[error("value {0} is not below the modulus")]
    OutOfRange(u64),
}
