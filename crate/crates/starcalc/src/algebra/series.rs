//! Truncated power series in the flow parameter `gamma`.
//!
//! Coefficients are `gamma`-free polynomials. Arithmetic truncates at the
//! smaller order of the two operands.

use std::collections::BTreeMap;

use super::poly::{Monomial, PolySymbol, Variable};
use super::ratfunc::RatSymbol;
use super::scalar::GaussianRational;
use super::AlgebraError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GammaSeries {
    /// `coeffs[k]` is the coefficient of `gamma^k`; length is `order + 1`.
    coeffs: Vec<PolySymbol>,
}

impl GammaSeries {
    pub fn from_coeffs(coeffs: Vec<PolySymbol>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the gamma^0 slot");
        debug_assert!(coeffs.iter().all(|c| !c.contains_var(&Variable::Gamma)));
        GammaSeries { coeffs }
    }

    pub fn zero(order: u32) -> Self {
        GammaSeries { coeffs: vec![PolySymbol::zero(); order as usize + 1] }
    }

    pub fn order(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeff(&self, k: u32) -> &PolySymbol {
        &self.coeffs[k as usize]
    }

    pub fn coeffs(&self) -> &[PolySymbol] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Split a polynomial into gamma-coefficients, truncating above `order`.
    /// Lossless whenever the gamma-degree is at most `order`.
    pub fn from_poly(p: &PolySymbol, order: u32) -> Self {
        let mut out = GammaSeries::zero(order);
        for (k, c) in p.univariate_in(&Variable::Gamma) {
            if k <= order {
                out.coeffs[k as usize] = c;
            }
        }
        out
    }

    pub fn constant(p: PolySymbol, order: u32) -> Self {
        let mut out = GammaSeries::zero(order);
        out.coeffs[0] = p;
        out
    }

    /// Reassemble the series as a polynomial in gamma.
    pub fn to_poly(&self) -> PolySymbol {
        let mut out = PolySymbol::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            out = &out + &c.mul_monomial(&Monomial::var_pow(Variable::Gamma, k as u32));
        }
        out
    }

    pub fn add(&self, rhs: &GammaSeries) -> GammaSeries {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &GammaSeries) -> GammaSeries {
        self.zip(rhs, |a, b| a - b)
    }

    fn zip(
        &self,
        rhs: &GammaSeries,
        f: impl Fn(&PolySymbol, &PolySymbol) -> PolySymbol,
    ) -> GammaSeries {
        let order = self.order().min(rhs.order());
        let mut coeffs = Vec::with_capacity(order as usize + 1);
        for k in 0..=order as usize {
            coeffs.push(f(&self.coeffs[k], &rhs.coeffs[k]));
        }
        GammaSeries { coeffs }
    }

    pub fn neg(&self) -> GammaSeries {
        GammaSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, rhs: &GammaSeries) -> GammaSeries {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![PolySymbol::zero(); order as usize + 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() || a > order as usize {
                continue;
            }
            for (b, cb) in rhs.coeffs.iter().enumerate() {
                let c = a + b;
                if c > order as usize {
                    break;
                }
                coeffs[c] = &coeffs[c] + &(ca * cb);
            }
        }
        GammaSeries { coeffs }
    }

    pub fn pow(&self, e: u32) -> GammaSeries {
        let mut acc = GammaSeries::constant(PolySymbol::one(), self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &GaussianRational) -> GammaSeries {
        GammaSeries { coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    /// Per-coefficient partial derivative (in a non-gamma variable).
    pub fn partial(&self, v: &Variable) -> GammaSeries {
        assert!(*v != Variable::Gamma, "gamma is the series variable");
        GammaSeries { coeffs: self.coeffs.iter().map(|p| p.partial(v)).collect() }
    }

    pub fn substitute(&self, map: &BTreeMap<Variable, PolySymbol>) -> GammaSeries {
        GammaSeries { coeffs: self.coeffs.iter().map(|p| p.substitute(map)).collect() }
    }

    pub fn truncate(&self, order: u32) -> GammaSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order as usize + 1);
        while coeffs.len() < order as usize + 1 {
            coeffs.push(PolySymbol::zero());
        }
        GammaSeries { coeffs }
    }

    pub fn hbar_free(&self) -> bool {
        self.coeffs.iter().all(|c| !c.contains_var(&Variable::Hbar))
    }

    /// Taylor-expand a rational function around `gamma = 0`.
    ///
    /// Requires the denominator to be a unit in the gamma-adic sense
    /// (nonzero at `gamma = 0`); each expansion coefficient must land back
    /// in the polynomial ring.
    pub fn expand_rat(f: &RatSymbol, order: u32) -> Result<GammaSeries, AlgebraError> {
        let num_parts = gamma_parts(f.num());
        let den_parts = gamma_parts(f.den());
        let d0 = den_parts.first().cloned().unwrap_or_else(RatSymbol::zero);
        if d0.is_zero() {
            return Err(AlgebraError::NotGammaAdicUnit);
        }
        let d0_inv = d0.inv().expect("checked nonzero");

        // inverse series of the denominator
        let n = order as usize;
        let mut inv = vec![RatSymbol::zero(); n + 1];
        inv[0] = d0_inv.clone();
        for k in 1..=n {
            let mut acc = RatSymbol::zero();
            for j in 1..=k {
                let dj = den_parts.get(j).cloned().unwrap_or_else(RatSymbol::zero);
                if dj.is_zero() {
                    continue;
                }
                acc = &acc + &(&dj * &inv[k - j]);
            }
            inv[k] = -&(&d0_inv * &acc);
        }

        let mut coeffs = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = RatSymbol::zero();
            for j in 0..=k {
                let nj = num_parts.get(j).cloned().unwrap_or_else(RatSymbol::zero);
                if nj.is_zero() {
                    continue;
                }
                acc = &acc + &(&nj * &inv[k - j]);
            }
            match acc.as_poly() {
                Some(p) => coeffs.push(p.clone()),
                None => return Err(AlgebraError::NonPolynomialSeriesCoefficient),
            }
        }
        Ok(GammaSeries { coeffs })
    }
}

/// Gamma-coefficients of a polynomial, as rational symbols, dense from 0.
fn gamma_parts(p: &PolySymbol) -> Vec<RatSymbol> {
    let uni = p.univariate_in(&Variable::Gamma);
    let max = uni.keys().max().copied().unwrap_or(0);
    let mut out = vec![RatSymbol::zero(); max as usize + 1];
    for (k, c) in uni {
        out[k as usize] = RatSymbol::from(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> PolySymbol {
        PolySymbol::var(Variable::P)
    }
    fn q() -> PolySymbol {
        PolySymbol::var(Variable::Q)
    }
    fn gamma() -> PolySymbol {
        PolySymbol::var(Variable::Gamma)
    }

    #[test]
    fn geometric_expansion() {
        // p/(1+gamma p) = p - gamma p^2 + gamma^2 p^3 - gamma^3 p^4 + ...
        let f = RatSymbol::new(p(), &PolySymbol::one() + &(&gamma() * &p())).unwrap();
        let s = GammaSeries::expand_rat(&f, 3).unwrap();
        for k in 0..=3u32 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let expected = p().pow(k + 1).scale(&GaussianRational::from_int(sign));
            assert_eq!(*s.coeff(k), expected);
        }
    }

    #[test]
    fn polynomial_expansion_is_lossless() {
        // q (1+gamma p)^2 = q + 2 gamma p q + gamma^2 p^2 q
        let w = &PolySymbol::one() + &(&gamma() * &p());
        let f = RatSymbol::from(&q() * &w.pow(2));
        let s = GammaSeries::expand_rat(&f, 2).unwrap();
        assert_eq!(*s.coeff(0), q());
        assert_eq!(*s.coeff(1), (&p() * &q()).scale(&GaussianRational::from_int(2)));
        assert_eq!(*s.coeff(2), &p().pow(2) * &q());
        assert_eq!(s.to_poly(), &q() * &w.pow(2));
    }

    #[test]
    fn pole_at_gamma_zero_rejected() {
        let f = RatSymbol::new(PolySymbol::one(), gamma()).unwrap();
        assert!(matches!(
            GammaSeries::expand_rat(&f, 4),
            Err(AlgebraError::NotGammaAdicUnit)
        ));
    }

    #[test]
    fn non_polynomial_coefficient_rejected() {
        // p/(q + gamma) expands with 1/q coefficients
        let f = RatSymbol::new(p(), &q() + &gamma()).unwrap();
        assert!(matches!(
            GammaSeries::expand_rat(&f, 2),
            Err(AlgebraError::NonPolynomialSeriesCoefficient)
        ));
    }

    #[test]
    fn remultiplying_by_den_recovers_num_mod_truncation() {
        let num = &p() + &(&gamma() * &q());
        let den = &PolySymbol::one() + &(&gamma() * &(&p() + &q()));
        let f = RatSymbol::new(num.clone(), den.clone()).unwrap();
        let n = 5;
        let s = GammaSeries::expand_rat(&f, n).unwrap();
        let back = s.mul(&GammaSeries::from_poly(&den, n));
        let expect = GammaSeries::from_poly(&num, n);
        assert_eq!(back, expect);
    }
}
