//! Poisson bracket, bidifferential powers, the Groenewold–Moyal star
//! product and the canonical-pair verification.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * the bidifferential is `f D g = (d_q f)(d_p g) - (d_p f)(d_q g)`, so
//!   `{q, p} = +1` and `{p, q} = -1`;
//! * `f * g = sum_n (i hbar / 2)^n / n! f [D]^n g`, which gives
//!   `p * q = pq - i hbar/2` and the canonical Moyal bracket
//!   `{p, q}_M = -i hbar`.
//!
//! A star series terminates exactly when one factor is polynomial in
//! `(p, q)`; the degree bound is inspected structurally, never guessed
//! numerically.

use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{
    binomial, AlgebraError, GammaSeries, GaussianRational, PolySymbol, RatSymbol, Variable,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StarError {
    #[error("star series does not terminate and no truncation was given")]
    NonTerminatingSeries,
    #[error("input depends on hbar; canonical-pair check is scoped to hbar-free maps")]
    HbarDependentInput,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `{f, g} = (d_q f)(d_p g) - (d_p f)(d_q g)`, exact.
pub fn poisson_bracket(f: &RatSymbol, g: &RatSymbol) -> RatSymbol {
    let fq = f.partial(&Variable::Q);
    let gp = g.partial(&Variable::P);
    let fp = f.partial(&Variable::P);
    let gq = g.partial(&Variable::Q);
    &(&fq * &gp) - &(&fp * &gq)
}

/// Iterated mixed partial `d_q^a d_p^b f`.
fn mixed_partial(f: &RatSymbol, dq: u32, dp: u32) -> RatSymbol {
    let mut out = f.clone();
    for _ in 0..dq {
        out = out.partial(&Variable::Q);
    }
    for _ in 0..dp {
        out = out.partial(&Variable::P);
    }
    out
}

/// `f [D]^n g` expanded by the binomial rule
/// `sum_k (-1)^k C(n,k) (d_q^{n-k} d_p^k f)(d_p^{n-k} d_q^k g)`.
pub fn bidiff_power(f: &RatSymbol, g: &RatSymbol, n: u32) -> RatSymbol {
    let mut acc = RatSymbol::zero();
    for k in 0..=n {
        let lhs = mixed_partial(f, n - k, k);
        if lhs.is_zero() {
            continue;
        }
        let rhs = mixed_partial(g, k, n - k);
        if rhs.is_zero() {
            continue;
        }
        let mut c = binomial(n, k);
        if k % 2 == 1 {
            c = -c;
        }
        acc = &acc + &(&lhs * &rhs).scale(&c);
    }
    acc
}

/// `(i hbar / 2)^n / n!` as an exact scalar polynomial.
fn star_weight(n: u32) -> RatSymbol {
    let mut denom = BigRational::from_integer(1.into());
    for j in 1..=n {
        // accumulate 2^n * n!
        denom *= BigRational::from_integer((2 * j as i64).into());
    }
    let c = &GaussianRational::i().pow(n)
        * &GaussianRational::from_rational(denom).inv().expect("nonzero");
    RatSymbol::from(PolySymbol::var_pow(Variable::Hbar, n)).scale(&c)
}

/// Largest star-series order that can contribute, if the series
/// terminates: the smaller `(p,q)`-polynomial degree of the two factors.
fn termination_bound(f: &RatSymbol, g: &RatSymbol) -> Option<u32> {
    match (f.pq_poly_degree(), g.pq_poly_degree()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (Some(a), None) => Some(a),
        (None, Some(b)) => Some(b),
        (None, None) => None,
    }
}

/// Star product of rational symbols. Exact when one factor is polynomial
/// in `(p, q)`; otherwise a truncation order in `hbar` must be supplied.
pub fn star_product(
    f: &RatSymbol,
    g: &RatSymbol,
    truncation: Option<u32>,
) -> Result<RatSymbol, StarError> {
    let bound = match (termination_bound(f, g), truncation) {
        (Some(b), None) => b,
        (Some(b), Some(t)) => b.min(t),
        (None, Some(t)) => t,
        (None, None) => return Err(StarError::NonTerminatingSeries),
    };
    let mut acc = RatSymbol::zero();
    for n in 0..=bound {
        let term = bidiff_power(f, g, n);
        if term.is_zero() {
            continue;
        }
        acc = &acc + &(&term * &star_weight(n));
    }
    Ok(acc)
}

/// `f * g - g * f`; only odd bidifferential powers survive.
pub fn moyal_bracket(
    f: &RatSymbol,
    g: &RatSymbol,
    truncation: Option<u32>,
) -> Result<RatSymbol, StarError> {
    let bound = match (termination_bound(f, g), truncation) {
        (Some(b), None) => b,
        (Some(b), Some(t)) => b.min(t),
        (None, Some(t)) => t,
        (None, None) => return Err(StarError::NonTerminatingSeries),
    };
    let mut acc = RatSymbol::zero();
    let two = GaussianRational::from_int(2);
    let mut n = 1;
    while n <= bound {
        let term = bidiff_power(f, g, n);
        if !term.is_zero() {
            acc = &acc + &(&term * &star_weight(n)).scale(&two);
        }
        n += 2;
    }
    Ok(acc)
}

// ---- series variants: brackets distribute over gamma-orders ----

fn series_binary(
    f: &GammaSeries,
    g: &GammaSeries,
    op: impl Fn(&RatSymbol, &RatSymbol) -> RatSymbol,
) -> GammaSeries {
    let order = f.order().min(g.order());
    let mut coeffs = vec![PolySymbol::zero(); order as usize + 1];
    for a in 0..=order {
        if f.coeff(a).is_zero() {
            continue;
        }
        let fa = RatSymbol::from(f.coeff(a));
        for b in 0..=(order - a) {
            if g.coeff(b).is_zero() {
                continue;
            }
            let gb = RatSymbol::from(g.coeff(b));
            let r = op(&fa, &gb);
            if r.is_zero() {
                continue;
            }
            let p = r.as_poly().expect("polynomial coefficients stay polynomial").clone();
            let c = (a + b) as usize;
            coeffs[c] = &coeffs[c] + &p;
        }
    }
    GammaSeries::from_coeffs(coeffs)
}

pub fn poisson_series(f: &GammaSeries, g: &GammaSeries) -> GammaSeries {
    series_binary(f, g, poisson_bracket)
}

pub fn bidiff_series(f: &GammaSeries, g: &GammaSeries, n: u32) -> GammaSeries {
    series_binary(f, g, |a, b| bidiff_power(a, b, n))
}

pub fn star_series(f: &GammaSeries, g: &GammaSeries) -> GammaSeries {
    series_binary(f, g, |a, b| {
        star_product(a, b, None).expect("polynomial coefficients terminate")
    })
}

pub fn moyal_series(f: &GammaSeries, g: &GammaSeries) -> GammaSeries {
    series_binary(f, g, |a, b| {
        moyal_bracket(a, b, None).expect("polynomial coefficients terminate")
    })
}

/// Outcome of the canonical-pair verification.
///
/// `moyal_terms[k]` holds the complete k-th odd term of the Moyal series,
/// `2 (i hbar/2)^{2k+1} / (2k+1)! * P [D]^{2k+1} Q`. The pair is canonical
/// when the Poisson bracket is exactly `-1` and every `k >= 1` term
/// vanishes identically, i.e. the Moyal bracket collapses to `-i hbar`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketReport {
    pub poisson: RatSymbol,
    pub moyal_terms: Vec<(u32, RatSymbol)>,
    pub is_canonical: bool,
    pub first_nonvanishing_correction: Option<u32>,
}

fn mb_term(p_map: &RatSymbol, q_map: &RatSymbol, k: u32) -> RatSymbol {
    let n = 2 * k + 1;
    let body = bidiff_power(p_map, q_map, n);
    if body.is_zero() {
        return RatSymbol::zero();
    }
    (&body * &star_weight(n)).scale(&GaussianRational::from_int(2))
}

/// Canonical-pair check for maps already given as truncated gamma-series.
pub fn check_canonical_pair_series(
    p_map: &GammaSeries,
    q_map: &GammaSeries,
    k_max: u32,
) -> Result<BracketReport, StarError> {
    let order = p_map.order().min(q_map.order());
    check_canonical_pair(
        &RatSymbol::from(p_map.to_poly()),
        &RatSymbol::from(q_map.to_poly()),
        k_max,
        Some(order),
    )
}

/// Verify a transformation `(p, q) -> (P, Q)` against the canonical
/// commutation structure. With `gamma_order` given, both maps are first
/// expanded as gamma-series to that order and the bracket terms are the
/// reassembled gamma-polynomials; otherwise the computation is exact
/// rational arithmetic.
pub fn check_canonical_pair(
    p_map: &RatSymbol,
    q_map: &RatSymbol,
    k_max: u32,
    gamma_order: Option<u32>,
) -> Result<BracketReport, StarError> {
    if p_map.contains_var(&Variable::Hbar) || q_map.contains_var(&Variable::Hbar) {
        return Err(StarError::HbarDependentInput);
    }
    let (poisson, terms): (RatSymbol, Vec<(u32, RatSymbol)>) = match gamma_order {
        None => {
            let poisson = poisson_bracket(p_map, q_map);
            let terms = (0..=k_max).map(|k| (k, mb_term(p_map, q_map, k))).collect();
            (poisson, terms)
        }
        Some(order) => {
            let ps = GammaSeries::expand_rat(p_map, order)?;
            let qs = GammaSeries::expand_rat(q_map, order)?;
            let poisson = RatSymbol::from(poisson_series(&ps, &qs).to_poly());
            let terms = (0..=k_max)
                .map(|k| {
                    let n = 2 * k + 1;
                    let body = bidiff_series(&ps, &qs, n);
                    let term = RatSymbol::from(body.to_poly());
                    let full = (&term * &star_weight(n)).scale(&GaussianRational::from_int(2));
                    (k, full)
                })
                .collect();
            (poisson, terms)
        }
    };
    let poisson_ok = poisson == RatSymbol::from_int(-1);
    let first_nonvanishing_correction = terms
        .iter()
        .skip(1)
        .find(|(_, t)| !t.is_zero())
        .map(|(k, _)| *k);
    let is_canonical = poisson_ok && first_nonvanishing_correction.is_none();
    Ok(BracketReport {
        poisson,
        moyal_terms: terms,
        is_canonical,
        first_nonvanishing_correction,
    })
}
