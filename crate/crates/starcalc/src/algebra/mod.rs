//! Exact arithmetic foundation: Gaussian rationals, sparse multivariate
//! polynomials, normalized rational functions and truncated gamma-series.
//!
//! Everything is immutable and pure; all identities downstream are tested
//! against literal zero in these rings.

pub mod gcd;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod series;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator vanishes at gamma = 0; not a gamma-adic unit")]
    NotGammaAdicUnit,
    #[error("series coefficient is not polynomial")]
    NonPolynomialSeriesCoefficient,
}

pub use gcd::poly_gcd;
pub use poly::{Monomial, PolySymbol, Variable};
pub use ratfunc::RatSymbol;
pub use scalar::{binomial, GaussianRational, Unit};
pub use series::GammaSeries;
