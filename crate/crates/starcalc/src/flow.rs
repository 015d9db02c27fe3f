//! Exponentiated Moyal–Lie vector fields as truncated series in the flow
//! parameter `gamma`.
//!
//! `flow(V, f, N, sign)` computes `sum_{n=0}^{N} (sign i gamma / hbar)^n / n! V^n f`.
//! For vector fields built from symmetric-monomial images the overall
//! `i hbar` of `V` cancels the `1/hbar`, so every series coefficient is an
//! `hbar`-polynomial; a leftover `hbar` pole signals a malformed generator.

use thiserror::Error;

use crate::algebra::{GammaSeries, GaussianRational, PolySymbol, RatSymbol, Variable};
use crate::weyl::DiffOperator;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("series coefficient at order {order} retains a negative hbar power")]
    ResidualHbarPole { order: u32 },
    #[error("series coefficient at order {order} is not polynomial")]
    NonPolynomialCoefficient { order: u32 },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FlowSign {
    Plus,
    Minus,
}

impl FlowSign {
    fn factor(self) -> GaussianRational {
        match self {
            FlowSign::Plus => GaussianRational::i(),
            FlowSign::Minus => -GaussianRational::i(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FlowResult {
    pub series: GammaSeries,
    pub generator: DiffOperator,
    pub hbar_free: bool,
}

/// Exponentiate `sign * i gamma V / hbar` on `f`, truncated at `order`.
pub fn flow(
    v: &DiffOperator,
    f: &RatSymbol,
    order: u32,
    sign: FlowSign,
) -> Result<FlowResult, FlowError> {
    let hbar = RatSymbol::var(Variable::Hbar);
    let mut coeffs: Vec<PolySymbol> = Vec::with_capacity(order as usize + 1);
    let mut iterate = f.clone(); // V^n f
    let mut scalar = RatSymbol::one(); // (sign i / hbar)^n / n!
    for n in 0..=order {
        if n > 0 {
            iterate = v.apply(&iterate);
            scalar = (&scalar / &hbar)
                .scale(&(&sign.factor() / &GaussianRational::from_int(n as i64)));
        }
        let term = &iterate * &scalar;
        if !term.den_free_of(&[Variable::Hbar]) {
            return Err(FlowError::ResidualHbarPole { order: n });
        }
        match term.as_poly() {
            Some(p) => coeffs.push(p.clone()),
            None => return Err(FlowError::NonPolynomialCoefficient { order: n }),
        }
    }
    let series = GammaSeries::from_coeffs(coeffs);
    let hbar_free = series.hbar_free();
    Ok(FlowResult { series, generator: v.clone(), hbar_free })
}

/// True iff the closed form's gamma-expansion matches the flow series
/// term by term through the flow's truncation order.
pub fn compare_closed_form(
    result: &FlowResult,
    closed: &RatSymbol,
) -> Result<bool, crate::algebra::AlgebraError> {
    let expansion = GammaSeries::expand_rat(closed, result.series.order())?;
    Ok(expansion == result.series)
}

/// `P^m Q^n - p^m q^n` in truncated series arithmetic; the zero series
/// certifies the conserved monomial combination.
pub fn flow_invariant(
    p_series: &GammaSeries,
    q_series: &GammaSeries,
    relation: (u32, u32),
) -> GammaSeries {
    let (m, n) = relation;
    let order = p_series.order().min(q_series.order());
    let lhs = p_series.truncate(order).pow(m).mul(&q_series.truncate(order).pow(n));
    let base = &PolySymbol::var_pow(Variable::P, m) * &PolySymbol::var_pow(Variable::Q, n);
    lhs.sub(&GammaSeries::constant(base, order))
}
