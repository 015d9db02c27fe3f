//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Variables are the distinguished phase-space names `p`, `q`, `hbar`,
//! `gamma` plus any declared parameter symbols. Terms live in a `BTreeMap`
//! keyed by monomial, so equal polynomials always have identical term maps
//! and iteration order is deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::scalar::GaussianRational;

/// A ring variable. The ordering `p < q < hbar < gamma < parameters`
/// (parameters alphabetical) fixes the canonical monomial order used
/// everywhere: term maps, printing and the leading-coefficient convention
/// of rational-function denominators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Variable {
    P,
    Q,
    Hbar,
    Gamma,
    Param(String),
}

impl Variable {
    pub fn param(name: &str) -> Self {
        Variable::Param(name.to_string())
    }

    pub fn name(&self) -> &str {
        match self {
            Variable::P => "p",
            Variable::Q => "q",
            Variable::Hbar => "hbar",
            Variable::Gamma => "gamma",
            Variable::Param(s) => s,
        }
    }

    /// Resolve a source-level name. Reserved names map to the distinguished
    /// variables; anything else becomes a parameter.
    pub fn from_name(name: &str) -> Self {
        match name {
            "p" => Variable::P,
            "q" => Variable::Q,
            "hbar" => Variable::Hbar,
            "gamma" => Variable::Gamma,
            other => Variable::Param(other.to_string()),
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A power product of variables. Exponents are strictly positive; absent
/// variables have exponent zero.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Monomial(BTreeMap<Variable, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(v: Variable) -> Self {
        Monomial::var_pow(v, 1)
    }

    pub fn var_pow(v: Variable, e: u32) -> Self {
        let mut m = BTreeMap::new();
        if e > 0 {
            m.insert(v, e);
        }
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: &Variable) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn degree_in(&self, vars: &[Variable]) -> u32 {
        vars.iter().map(|v| self.exponent(v)).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &u32)> {
        self.0.iter()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            *out.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }

    /// Componentwise quotient, when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            let cur = out.get_mut(v)?;
            if *cur < *e {
                return None;
            }
            *cur -= e;
            if *cur == 0 {
                out.remove(v);
            }
        }
        Some(Monomial(out))
    }

    fn with_exponent(&self, v: &Variable, e: u32) -> Monomial {
        let mut out = self.0.clone();
        if e == 0 {
            out.remove(v);
        } else {
            out.insert(v.clone(), e);
        }
        Monomial(out)
    }
}

/// Lexicographic order in the canonical variable sequence: the monomial
/// with the higher exponent on the earliest differing variable is the
/// greater one. This is a proper monomial order (multiplicative, with 1
/// minimal), which the exact-division and gcd routines rely on.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.0.iter().peekable();
        let mut b = other.0.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((av, ae)), Some((bv, be))) => match av.cmp(bv) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ae.cmp(be) {
                        Ordering::Equal => {
                            a.next();
                            b.next();
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial in canonical form: no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PolySymbol {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl PolySymbol {
    pub fn zero() -> Self {
        PolySymbol { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        PolySymbol::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        PolySymbol { terms }
    }

    pub fn from_int(n: i64) -> Self {
        PolySymbol::constant(GaussianRational::from_int(n))
    }

    pub fn var(v: Variable) -> Self {
        PolySymbol::term(GaussianRational::one(), Monomial::var(v))
    }

    pub fn var_pow(v: Variable, e: u32) -> Self {
        PolySymbol::term(GaussianRational::one(), Monomial::var_pow(v, e))
    }

    pub fn term(c: GaussianRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        PolySymbol { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussianRational)>>(iter: I) -> Self {
        let mut out = PolySymbol::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `Some(c)` when the polynomial is the constant `c` (zero included).
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// Greatest term in the canonical monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (v, _) in m.iter() {
                out.insert(v.clone());
            }
        }
        out
    }

    pub fn contains_var(&self, v: &Variable) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn degree_in(&self, v: &Variable) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Total degree counting only `p` and `q`.
    pub fn pq_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(&Variable::P) + m.exponent(&Variable::Q))
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &GaussianRational) -> PolySymbol {
        if c.is_zero() {
            return PolySymbol::zero();
        }
        PolySymbol {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> PolySymbol {
        PolySymbol {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> PolySymbol {
        let mut acc = PolySymbol::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact partial derivative.
    pub fn partial(&self, v: &Variable) -> PolySymbol {
        let mut out = PolySymbol::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let coeff = c * &GaussianRational::from_int(e as i64);
            out.add_term(m.with_exponent(v, e - 1), coeff);
        }
        out
    }

    /// View as a univariate polynomial in `v` with polynomial coefficients.
    pub fn univariate_in(&self, v: &Variable) -> BTreeMap<u32, PolySymbol> {
        let mut out: BTreeMap<u32, PolySymbol> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let rest = m.with_exponent(v, 0);
            out.entry(e)
                .or_insert_with(PolySymbol::zero)
                .add_term(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    pub fn from_univariate(v: &Variable, coeffs: &BTreeMap<u32, PolySymbol>) -> PolySymbol {
        let mut out = PolySymbol::zero();
        for (e, c) in coeffs {
            out = &out + &c.mul_monomial(&Monomial::var_pow(v.clone(), *e));
        }
        out
    }

    /// Substitute polynomials for variables; unmapped variables stay put.
    pub fn substitute(&self, map: &BTreeMap<Variable, PolySymbol>) -> PolySymbol {
        let mut out = PolySymbol::zero();
        for (m, c) in &self.terms {
            let mut term = PolySymbol::constant(c.clone());
            for (v, e) in m.iter() {
                match map.get(v) {
                    Some(repl) => term = &term * &repl.pow(*e),
                    None => term = term.mul_monomial(&Monomial::var_pow(v.clone(), *e)),
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Evaluate with exact scalar values for every variable that occurs.
    /// Panics if a variable is missing from the assignment.
    pub fn eval(&self, map: &BTreeMap<Variable, GaussianRational>) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                let val = map
                    .get(v)
                    .unwrap_or_else(|| panic!("missing assignment for variable {v}"));
                t = &t * &val.pow(*e);
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Exact division, `Some(q)` iff `d` divides `self` in the ring.
    pub fn div_exact(&self, d: &PolySymbol) -> Option<PolySymbol> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = PolySymbol::zero();
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let dc_inv = dc.inv().unwrap();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            let qm = rm.div(&dm)?;
            let qc = &rc * &dc_inv;
            let qterm = PolySymbol::term(qc, qm);
            quot = &quot + &qterm;
            rem = &rem - &(&qterm * d);
        }
        Some(quot)
    }

    /// Divide every coefficient by the leading coefficient.
    pub fn monic(&self) -> PolySymbol {
        match self.leading_term() {
            None => PolySymbol::zero(),
            Some((_, c)) => {
                let inv = c.inv().unwrap();
                self.scale(&inv)
            }
        }
    }

    /// The rational-content part shared by all coefficients, as a positive
    /// rational (gcd of numerators over lcm of denominators of both parts).
    /// Returns 1 for the zero polynomial.
    pub fn rational_content(&self) -> BigRational {
        use num_integer::Integer as _;
        use num_traits::{One, Signed, Zero};
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            for part in [c.re(), c.im()] {
                if part.is_zero() {
                    continue;
                }
                num_gcd = num_gcd.gcd(&part.numer().abs());
                den_lcm = den_lcm.lcm(part.denom());
            }
        }
        if num_gcd.is_zero() {
            BigRational::one()
        } else {
            BigRational::new(num_gcd, den_lcm)
        }
    }
}

impl Add for &PolySymbol {
    type Output = PolySymbol;
    fn add(self, rhs: &PolySymbol) -> PolySymbol {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &PolySymbol {
    type Output = PolySymbol;
    fn sub(self, rhs: &PolySymbol) -> PolySymbol {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &PolySymbol {
    type Output = PolySymbol;
    fn mul(self, rhs: &PolySymbol) -> PolySymbol {
        let mut out = PolySymbol::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &PolySymbol {
    type Output = PolySymbol;
    fn neg(self) -> PolySymbol {
        PolySymbol {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned_poly {
    ($trait:ident, $method:ident) => {
        impl $trait for PolySymbol {
            type Output = PolySymbol;
            fn $method(self, rhs: PolySymbol) -> PolySymbol {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_poly!(Add, add);
forward_owned_poly!(Sub, sub);
forward_owned_poly!(Mul, mul);

impl Neg for PolySymbol {
    type Output = PolySymbol;
    fn neg(self) -> PolySymbol {
        -&self
    }
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::printer::poly_plain(self))
    }
}
