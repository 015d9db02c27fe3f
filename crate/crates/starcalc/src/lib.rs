//! Exact symbolic calculus on the `(p, q)` phase plane.
//!
//! The crate implements, over the Gaussian rationals:
//!
//! * sparse multivariate polynomials, normalized rational functions and
//!   truncated `gamma`-series ([`algebra`]);
//! * an expression parser and canonical printers ([`mod@parse`], [`printer`]);
//! * the Groenewold–Moyal star product, Poisson and Moyal brackets, and a
//!   canonical-pair verifier ([`star`]);
//! * the differential-operator ring with Bopp shifts, images of
//!   symmetrically ordered monomials and Moyal–Lie vector fields
//!   ([`weyl`]);
//! * exponentiated vector-field flows as truncated series ([`flow`]);
//! * generating functions of canonical transformations: star-eigen
//!   residuals, the gradient system for the phase `T`, closed-form
//!   `SL(2)` and linear-potential solutions, and the four Dirac integral
//!   kernels ([`genfun`]).
//!
//! Everything is exact: identities hold as literal zeros, never up to a
//! tolerance. All values are immutable; all operations are pure functions
//! and safe to evaluate in parallel over independent inputs.

pub mod algebra;
pub mod flow;
pub mod genfun;
pub mod json;
pub mod parse;
pub mod printer;
pub mod star;
pub mod weyl;

pub use algebra::{
    AlgebraError, GammaSeries, GaussianRational, Monomial, PolySymbol, RatSymbol, Variable,
};
pub use parse::{parse, parse_with, ParseError};
pub use printer::Format;
pub use star::{
    bidiff_power, check_canonical_pair, check_canonical_pair_series, moyal_bracket,
    poisson_bracket, star_product, BracketReport, StarError,
};
