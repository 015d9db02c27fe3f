//! Normalized fractions of polynomials.
//!
//! A `RatSymbol` is always kept in canonical form: gcd-reduced, with the
//! denominator monic in the global monomial order. Two equal rational
//! functions therefore compare equal structurally, which is what lets the
//! whole crate test identities by `== zero`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::gcd::poly_gcd;
use super::poly::{PolySymbol, Variable};
use super::scalar::GaussianRational;
use super::AlgebraError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatSymbol {
    num: PolySymbol,
    den: PolySymbol,
}

impl RatSymbol {
    /// Build and normalize `num/den`.
    pub fn new(num: PolySymbol, den: PolySymbol) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: PolySymbol, den: PolySymbol) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatSymbol { num, den: PolySymbol::one() };
        }
        if den.is_one() {
            return RatSymbol { num, den };
        }
        if let Some(c) = den.as_constant() {
            return RatSymbol {
                num: num.scale(&c.inv().expect("nonzero denominator")),
                den: PolySymbol::one(),
            };
        }
        // a nonzero constant numerator is coprime to everything
        let g = if num.as_constant().is_some() {
            PolySymbol::one()
        } else {
            poly_gcd(&num, &den)
        };
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        // monic denominator fixes the scalar freedom
        let lc = den.leading_term().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = lc.inv().unwrap();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatSymbol { num, den }
    }

    pub fn zero() -> Self {
        RatSymbol { num: PolySymbol::zero(), den: PolySymbol::one() }
    }

    pub fn one() -> Self {
        RatSymbol { num: PolySymbol::one(), den: PolySymbol::one() }
    }

    pub fn from_int(n: i64) -> Self {
        PolySymbol::from_int(n).into()
    }

    pub fn constant(c: GaussianRational) -> Self {
        PolySymbol::constant(c).into()
    }

    pub fn var(v: Variable) -> Self {
        PolySymbol::var(v).into()
    }

    pub fn num(&self) -> &PolySymbol {
        &self.num
    }

    pub fn den(&self) -> &PolySymbol {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// `Some(&num)` when the denominator is 1.
    pub fn as_poly(&self) -> Option<&PolySymbol> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    pub fn contains_var(&self, v: &Variable) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    /// True when the denominator involves none of `vars`; the fraction is
    /// then a polynomial in those variables (with rational-function
    /// coefficients in the rest).
    pub fn den_free_of(&self, vars: &[Variable]) -> bool {
        vars.iter().all(|v| !self.den.contains_var(v))
    }

    /// Total degree of the numerator in `p, q` when the denominator is
    /// `p,q`-free; `None` otherwise. This is the structural bound used to
    /// detect terminating star-product series.
    pub fn pq_poly_degree(&self) -> Option<u32> {
        if self.den_free_of(&[Variable::P, Variable::Q]) {
            Some(self.num.pq_degree())
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<RatSymbol, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(RatSymbol::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: u32) -> RatSymbol {
        RatSymbol::normalized(self.num.pow(e), self.den.pow(e))
    }

    /// Exact quotient-rule partial derivative.
    pub fn partial(&self, v: &Variable) -> RatSymbol {
        let dn = self.num.partial(v);
        let dd = self.den.partial(v);
        if dd.is_zero() {
            return RatSymbol::normalized(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        let den = &self.den * &self.den;
        RatSymbol::normalized(num, den)
    }

    /// Substitute rational functions for variables (unmapped variables stay).
    /// Fails if a substituted denominator vanishes.
    pub fn substitute(&self, map: &BTreeMap<Variable, RatSymbol>) -> Result<RatSymbol, AlgebraError> {
        let num = eval_poly_rat(&self.num, map)?;
        let den = eval_poly_rat(&self.den, map)?;
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(&num / &den)
    }

    pub fn scale(&self, c: &GaussianRational) -> RatSymbol {
        RatSymbol::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Variable> {
        let mut vs = self.num.vars();
        vs.extend(self.den.vars());
        vs
    }
}

/// Evaluate a polynomial with `RatSymbol` values plugged in for mapped vars.
fn eval_poly_rat(
    p: &PolySymbol,
    map: &BTreeMap<Variable, RatSymbol>,
) -> Result<RatSymbol, AlgebraError> {
    let mut acc = RatSymbol::zero();
    for (m, c) in p.terms() {
        let mut t = RatSymbol::constant(c.clone());
        for (v, e) in m.iter() {
            match map.get(v) {
                Some(r) => t = &t * &r.pow(*e),
                None => {
                    t = &t * &RatSymbol::from(PolySymbol::var_pow(v.clone(), *e));
                }
            }
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

impl From<PolySymbol> for RatSymbol {
    fn from(num: PolySymbol) -> Self {
        RatSymbol { num, den: PolySymbol::one() }
    }
}

impl From<&PolySymbol> for RatSymbol {
    fn from(num: &PolySymbol) -> Self {
        num.clone().into()
    }
}

impl Add for &RatSymbol {
    type Output = RatSymbol;
    fn add(self, rhs: &RatSymbol) -> RatSymbol {
        if self.den.is_one() && rhs.den.is_one() {
            return RatSymbol { num: &self.num + &rhs.num, den: PolySymbol::one() };
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatSymbol::normalized(num, &self.den * &rhs.den)
    }
}

impl Sub for &RatSymbol {
    type Output = RatSymbol;
    fn sub(self, rhs: &RatSymbol) -> RatSymbol {
        if self.den.is_one() && rhs.den.is_one() {
            return RatSymbol { num: &self.num - &rhs.num, den: PolySymbol::one() };
        }
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        RatSymbol::normalized(num, &self.den * &rhs.den)
    }
}

impl Mul for &RatSymbol {
    type Output = RatSymbol;
    fn mul(self, rhs: &RatSymbol) -> RatSymbol {
        if self.den.is_one() && rhs.den.is_one() {
            return RatSymbol { num: &self.num * &rhs.num, den: PolySymbol::one() };
        }
        RatSymbol::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on a zero divisor; use [`RatSymbol::inv`] for a checked route.
impl Div for &RatSymbol {
    type Output = RatSymbol;
    fn div(self, rhs: &RatSymbol) -> RatSymbol {
        assert!(!rhs.is_zero(), "division by zero RatSymbol");
        RatSymbol::normalized(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatSymbol {
    type Output = RatSymbol;
    fn neg(self) -> RatSymbol {
        RatSymbol { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned_rat {
    ($trait:ident, $method:ident) => {
        impl $trait for RatSymbol {
            type Output = RatSymbol;
            fn $method(self, rhs: RatSymbol) -> RatSymbol {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_rat!(Add, add);
forward_owned_rat!(Sub, sub);
forward_owned_rat!(Mul, mul);
forward_owned_rat!(Div, div);

impl Neg for RatSymbol {
    type Output = RatSymbol;
    fn neg(self) -> RatSymbol {
        -&self
    }
}

impl fmt::Display for RatSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::printer::rat_plain(self))
    }
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
    fn one_plus_gp() -> PolySymbol {
        &PolySymbol::one() + &(&gamma() * &p())
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(
            RatSymbol::new(p(), PolySymbol::zero()),
            Err(AlgebraError::ZeroDenominator)
        ));
    }

    #[test]
    fn common_factor_cancels() {
        // (p^2 - q^2)/(p - q) = p + q
        let f = RatSymbol::new(&p().pow(2) - &q().pow(2), &p() - &q()).unwrap();
        assert_eq!(f, RatSymbol::from(&p() + &q()));
    }

    #[test]
    fn content_reduction() {
        // (2p)/4 normalizes to the polynomial p/2
        let f = RatSymbol::new(
            p().scale(&GaussianRational::from_int(2)),
            PolySymbol::from_int(4),
        )
        .unwrap();
        assert_eq!(f, RatSymbol::from(p().scale(&GaussianRational::ratio(1, 2))));
        assert!(f.den().is_one());
    }

    #[test]
    fn gcd_reduction_with_powers() {
        // ((1+gp)^3 q)/(1+gp) = q (1+gp)^2
        let w = one_plus_gp();
        let f = RatSymbol::new(&w.pow(3) * &q(), w.clone()).unwrap();
        assert_eq!(f, RatSymbol::from(&q() * &w.pow(2)));
    }

    #[test]
    fn quotient_rule() {
        // d/dp [p/(1+gp)] = 1/(1+gp)^2
        let w = one_plus_gp();
        let f = RatSymbol::new(p(), w.clone()).unwrap();
        let df = f.partial(&Variable::P);
        assert_eq!(df, RatSymbol::new(PolySymbol::one(), w.pow(2)).unwrap());
    }

    #[test]
    fn mixed_partials_commute() {
        let w = one_plus_gp();
        let f = RatSymbol::new(&p() * &q().pow(3), &w * &(&q() + &gamma())).unwrap();
        let a = f.partial(&Variable::P).partial(&Variable::Q);
        let b = f.partial(&Variable::Q).partial(&Variable::P);
        assert_eq!(a, b);
    }

    #[test]
    fn normalize_times_den_recovers_num() {
        let a = &(&p() + &q()) * &(&p() - &q());
        let b = &(&p() - &q()) * &gamma();
        let f = RatSymbol::new(a.clone(), b.clone()).unwrap();
        let back = &f * &RatSymbol::from(b);
        assert_eq!(back, RatSymbol::from(a));
    }

    #[test]
    fn substitution() {
        // p/(1+gp) with p -> 2 gives 2/(1+2g)
        let f = RatSymbol::new(p(), one_plus_gp()).unwrap();
        let mut map = BTreeMap::new();
        map.insert(Variable::P, RatSymbol::from_int(2));
        let g = f.substitute(&map).unwrap();
        let expected = RatSymbol::new(
            PolySymbol::from_int(2),
            &PolySymbol::one() + &gamma().scale(&GaussianRational::from_int(2)),
        )
        .unwrap();
        assert_eq!(g, expected);
    }
}
