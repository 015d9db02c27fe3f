//! The differential-operator ring on phase-space symbols: Bopp shifts,
//! images of symmetrically ordered monomials, Moyal–Lie vector fields and
//! symbols of operator words.
//!
//! Operators are kept in normal form with every derivative commuted to the
//! right of the coefficient functions; composition re-normalizes through
//! the Leibniz rule. Equality is representation equality in that form.
//!
//! The image `S_{m,n}` of the symmetrized monomial in the left/right Bopp
//! letters acts on a symbol `f` exactly as the Moyal bracket
//! `{f, p^m q^n}_M`; that sign pairing is pinned by the `(2,1)` case,
//! whose normal form is `i hbar (2 p q d_q - p^2 d_p + (hbar^2/4) d_q^2 d_p)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{GaussianRational, Monomial, PolySymbol, RatSymbol, Variable};
use crate::star::{star_product, StarError};

/// A finite sum of `coeff(p,q,...) * d_p^a d_q^b` terms in normal form.
/// Keys are the derivative orders `(a, b)`; zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DiffOperator {
    terms: BTreeMap<(u32, u32), RatSymbol>,
}

impl DiffOperator {
    pub fn zero() -> Self {
        DiffOperator { terms: BTreeMap::new() }
    }

    pub fn identity() -> Self {
        DiffOperator::term(RatSymbol::one(), 0, 0)
    }

    /// `coeff * d_p^dp d_q^dq`.
    pub fn term(coeff: RatSymbol, dp: u32, dq: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((dp, dq), coeff);
        }
        DiffOperator { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &RatSymbol)> {
        self.terms.iter()
    }

    pub fn coeff(&self, dp: u32, dq: u32) -> RatSymbol {
        self.terms.get(&(dp, dq)).cloned().unwrap_or_else(RatSymbol::zero)
    }

    fn add_term(&mut self, key: (u32, u32), coeff: RatSymbol) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                let sum = &*c + &coeff;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn add(&self, rhs: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, -c);
        }
        out
    }

    pub fn neg(&self) -> DiffOperator {
        DiffOperator { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn scale(&self, c: &RatSymbol) -> DiffOperator {
        if c.is_zero() {
            return DiffOperator::zero();
        }
        DiffOperator { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    /// Operator product `self . rhs` (apply `rhs` first), re-normalized by
    /// the Leibniz rule.
    pub fn compose(&self, rhs: &DiffOperator) -> DiffOperator {
        let mut out = DiffOperator::zero();
        for ((ja, ka), ca) in &self.terms {
            for ((jb, kb), cb) in &rhs.terms {
                // d_p^ja d_q^ka (cb * ...) redistributed over cb
                for r in 0..=*ja {
                    for s in 0..=*ka {
                        let db = mixed_partial_rat(cb, r, s);
                        if db.is_zero() {
                            continue;
                        }
                        let c = ca
                            .scale(&binom(*ja, r))
                            .scale(&binom(*ka, s));
                        out.add_term((ja - r + jb, ka - s + kb), &c * &db);
                    }
                }
            }
        }
        out
    }

    /// `self . rhs - rhs . self`.
    pub fn commutator(&self, rhs: &DiffOperator) -> DiffOperator {
        self.compose(rhs).sub(&rhs.compose(self))
    }

    /// Exact action on a symbol.
    pub fn apply(&self, f: &RatSymbol) -> RatSymbol {
        let mut out = RatSymbol::zero();
        for ((dp, dq), c) in &self.terms {
            let df = mixed_partial_rat(f, *dp, *dq);
            if df.is_zero() {
                continue;
            }
            out = &out + &(c * &df);
        }
        out
    }

    /// True when no coefficient involves `hbar`.
    pub fn hbar_free(&self) -> bool {
        self.terms.values().all(|c| !c.contains_var(&Variable::Hbar))
    }
}

use crate::algebra::binomial as binom;

fn mixed_partial_rat(f: &RatSymbol, dp: u32, dq: u32) -> RatSymbol {
    let mut out = f.clone();
    for _ in 0..dp {
        out = out.partial(&Variable::P);
    }
    for _ in 0..dq {
        out = out.partial(&Variable::Q);
    }
    out
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for ((dp, dq), c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if *dp > 0 {
                write!(f, "*d_p^{dp}")?;
            }
            if *dq > 0 {
                write!(f, "*d_q^{dq}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoppSide {
    Left,
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoppVar {
    P,
    Q,
}

/// The four Bopp shift operators:
/// `p_L = p + (i hbar/2) d_q`, `p_R = p - (i hbar/2) d_q`,
/// `q_L = q - (i hbar/2) d_p`, `q_R = q + (i hbar/2) d_p`.
pub fn bopp(side: BoppSide, var: BoppVar) -> DiffOperator {
    let half_i_hbar = RatSymbol::from(PolySymbol::var(Variable::Hbar))
        .scale(&GaussianRational::imag_ratio(1, 2));
    let (mult, deriv) = match var {
        BoppVar::P => {
            let sign = match side {
                BoppSide::Left => half_i_hbar,
                BoppSide::Right => -&half_i_hbar,
            };
            (RatSymbol::var(Variable::P), DiffOperator::term(sign, 0, 1))
        }
        BoppVar::Q => {
            let sign = match side {
                BoppSide::Left => -&half_i_hbar,
                BoppSide::Right => half_i_hbar,
            };
            (RatSymbol::var(Variable::Q), DiffOperator::term(sign, 1, 0))
        }
    };
    DiffOperator::term(mult, 0, 0).add(&deriv)
}

/// A symmetrically ordered monomial with symbol exactly `p^m q^n`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct WeylMonomial {
    pub m: u32,
    pub n: u32,
}

impl WeylMonomial {
    pub fn new(m: u32, n: u32) -> Self {
        WeylMonomial { m, n }
    }

    pub fn symbol(&self) -> PolySymbol {
        &PolySymbol::var_pow(Variable::P, self.m) * &PolySymbol::var_pow(Variable::Q, self.n)
    }
}

/// All distinct arrangements of `m` copies of `P` and `n` copies of `Q`.
fn arrangements(m: u32, n: u32) -> Vec<Vec<BoppVar>> {
    fn rec(m: u32, n: u32, cur: &mut Vec<BoppVar>, out: &mut Vec<Vec<BoppVar>>) {
        if m == 0 && n == 0 {
            out.push(cur.clone());
            return;
        }
        if m > 0 {
            cur.push(BoppVar::P);
            rec(m - 1, n, cur, out);
            cur.pop();
        }
        if n > 0 {
            cur.push(BoppVar::Q);
            rec(m, n - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, n, &mut Vec::new(), &mut out);
    out
}

/// Symmetrized product of the Bopp letters on one side.
fn symmetrized_side(side: BoppSide, m: u32, n: u32) -> DiffOperator {
    let words = arrangements(m, n);
    let weight = {
        // m! n! / (m+n)! = 1 / C(m+n, m)
        binom(m + n, m).inv().expect("binomial is nonzero")
    };
    let mut acc = DiffOperator::zero();
    for word in &words {
        let mut op = DiffOperator::identity();
        for letter in word {
            op = op.compose(&bopp(side, *letter));
        }
        acc = acc.add(&op);
    }
    acc.scale(&RatSymbol::constant(weight))
}

/// `S_{m,n}`: the normal-form image of the symmetric monomial, built as
/// the symmetrized word in left letters minus the symmetrized word in
/// right letters. `S_{0,0} = 0` since constants commute.
pub fn image_of_monomial(t: WeylMonomial) -> DiffOperator {
    symmetrized_side(BoppSide::Left, t.m, t.n).sub(&symmetrized_side(BoppSide::Right, t.m, t.n))
}

/// A generator expanded over symmetric monomials. Coefficients are
/// `(p,q)`-free polynomials (ordinarily scalars, but images of Moyal
/// brackets carry explicit `i hbar` factors, so polynomial coefficients in
/// `hbar` and parameters are allowed).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GeneratorExpansion {
    coeffs: BTreeMap<(u32, u32), PolySymbol>,
}

impl GeneratorExpansion {
    pub fn new() -> Self {
        GeneratorExpansion::default()
    }

    pub fn insert(&mut self, m: u32, n: u32, coeff: PolySymbol) {
        assert!(
            !coeff.contains_var(&Variable::P) && !coeff.contains_var(&Variable::Q),
            "expansion coefficients must be (p,q)-free"
        );
        if coeff.is_zero() {
            self.coeffs.remove(&(m, n));
        } else {
            self.coeffs.insert((m, n), coeff);
        }
    }

    pub fn scalar(m: u32, n: u32, c: GaussianRational) -> Self {
        let mut out = GeneratorExpansion::new();
        out.insert(m, n, PolySymbol::constant(c));
        out
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&(u32, u32), &PolySymbol)> {
        self.coeffs.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Split a polynomial symbol into `coeff(hbar, params) * p^m q^n`
    /// contributions.
    pub fn from_symbol(f: &PolySymbol) -> Self {
        let mut out = GeneratorExpansion::new();
        let mut grouped: BTreeMap<(u32, u32), PolySymbol> = BTreeMap::new();
        for (mono, c) in f.terms() {
            let m = mono.exponent(&Variable::P);
            let n = mono.exponent(&Variable::Q);
            let mut rest = Monomial::one();
            for (v, e) in mono.iter() {
                if *v != Variable::P && *v != Variable::Q {
                    rest = rest.mul(&Monomial::var_pow(v.clone(), *e));
                }
            }
            let entry = grouped.entry((m, n)).or_insert_with(PolySymbol::zero);
            *entry = &*entry + &PolySymbol::term(c.clone(), rest);
        }
        for ((m, n), coeff) in grouped {
            out.insert(m, n, coeff);
        }
        out
    }

    /// The symbol this expansion represents.
    pub fn to_symbol(&self) -> PolySymbol {
        let mut acc = PolySymbol::zero();
        for ((m, n), c) in &self.coeffs {
            acc = &acc + &(c * &WeylMonomial::new(*m, *n).symbol());
        }
        acc
    }
}

/// The Moyal–Lie vector field `V = sum a_{m,n} S_{m,n}`; linear in the
/// expansion.
pub fn moyal_lie_vector(a: &GeneratorExpansion) -> DiffOperator {
    let mut acc = DiffOperator::zero();
    for ((m, n), coeff) in a.coeffs() {
        let s = image_of_monomial(WeylMonomial::new(*m, *n));
        acc = acc.add(&s.scale(&RatSymbol::from(coeff)));
    }
    acc
}

/// `A . B - B . A` in normal form.
pub fn operator_commutator(a: &DiffOperator, b: &DiffOperator) -> DiffOperator {
    a.commutator(b)
}

/// A letter of an operator word.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Letter {
    P,
    Q,
}

/// Symbol of a finite operator word, computed as the star product of the
/// letters' symbols in order. The empty word is the identity operator.
pub fn weyl_symbol_of_word(word: &[Letter]) -> Result<RatSymbol, StarError> {
    let mut acc = RatSymbol::one();
    for letter in word {
        let sym = match letter {
            Letter::P => RatSymbol::var(Variable::P),
            Letter::Q => RatSymbol::var(Variable::Q),
        };
        acc = star_product(&acc, &sym, None)?;
    }
    Ok(acc)
}
