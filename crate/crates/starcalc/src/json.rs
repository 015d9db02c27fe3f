//! JSON wire forms for symbols and operators.
//!
//! Polynomials serialize as `{"vars": [...], "terms": [{"coeff": {"re":
//! "n/d", "im": "n/d"}, "exps": [...]}]}` with exponent vectors aligned to
//! the `vars` list; rationals are decimal-free `n/d` strings. The encoding
//! is canonical, so encode-decode round-trips are bit-exact.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{GaussianRational, Monomial, PolySymbol, RatSymbol, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("malformed rational literal `{0}`")]
    BadRational(String),
    #[error("exponent vector length {got} does not match {want} variables")]
    ExponentArity { got: usize, want: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("{0}")]
    Serde(String),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CoeffJson {
    pub re: String,
    pub im: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TermJson {
    pub coeff: CoeffJson,
    pub exps: Vec<u32>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct RatJson {
    pub num: PolyJson,
    pub den: PolyJson,
}

fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rational_from_string(s: &str) -> Result<BigRational, JsonError> {
    let bad = || JsonError::BadRational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(JsonError::ZeroDenominator);
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n = BigInt::from_str(s.trim()).map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub fn poly_to_json(p: &PolySymbol) -> PolyJson {
    let vars: Vec<Variable> = p.vars().into_iter().collect();
    let var_names = vars.iter().map(|v| v.name().to_string()).collect();
    let mut terms = Vec::new();
    for (m, c) in p.terms() {
        let exps = vars.iter().map(|v| m.exponent(v)).collect();
        terms.push(TermJson {
            coeff: CoeffJson {
                re: rational_to_string(c.re()),
                im: rational_to_string(c.im()),
            },
            exps,
        });
    }
    PolyJson { vars: var_names, terms }
}

pub fn poly_from_json(j: &PolyJson) -> Result<PolySymbol, JsonError> {
    let vars: Vec<Variable> = j.vars.iter().map(|n| Variable::from_name(n)).collect();
    let mut terms = Vec::new();
    for t in &j.terms {
        if t.exps.len() != vars.len() {
            return Err(JsonError::ExponentArity { got: t.exps.len(), want: vars.len() });
        }
        let re = rational_from_string(&t.coeff.re)?;
        let im = rational_from_string(&t.coeff.im)?;
        let mut mono = Monomial::one();
        for (v, e) in vars.iter().zip(&t.exps) {
            mono = mono.mul(&Monomial::var_pow(v.clone(), *e));
        }
        terms.push((mono, GaussianRational::new(re, im)));
    }
    Ok(PolySymbol::from_terms(terms))
}

pub fn rat_to_json(f: &RatSymbol) -> RatJson {
    RatJson { num: poly_to_json(f.num()), den: poly_to_json(f.den()) }
}

pub fn rat_from_json(j: &RatJson) -> Result<RatSymbol, JsonError> {
    let num = poly_from_json(&j.num)?;
    let den = poly_from_json(&j.den)?;
    RatSymbol::new(num, den).map_err(|_| JsonError::ZeroDenominator)
}

pub fn rat_to_json_string(f: &RatSymbol) -> String {
    serde_json::to_string(&rat_to_json(f)).expect("serializable")
}

pub fn rat_from_json_string(s: &str) -> Result<RatSymbol, JsonError> {
    let j: RatJson = serde_json::from_str(s).map_err(|e| JsonError::Serde(e.to_string()))?;
    rat_from_json(&j)
}

/// One `coeff * d^dp/dp d^dq/dq` term of a differential operator.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct DiffOpTermJson {
    pub dp: u32,
    pub dq: u32,
    pub coeff: RatJson,
}

/// A gamma-series as its list of coefficients.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SeriesJson {
    pub order: u32,
    pub coeffs: Vec<PolyJson>,
}

pub fn series_to_json(s: &crate::algebra::GammaSeries) -> SeriesJson {
    SeriesJson {
        order: s.order(),
        coeffs: s.coeffs().iter().map(poly_to_json).collect(),
    }
}

pub fn diff_op_to_json(op: &crate::weyl::DiffOperator) -> Vec<DiffOpTermJson> {
    op.terms()
        .map(|((dp, dq), coeff)| DiffOpTermJson { dp: *dp, dq: *dq, coeff: rat_to_json(coeff) })
        .collect()
}

/// Structured prefactor: rational part, radicand of the square root,
/// eighth-of-pi phase and half-integer power of `2 pi hbar`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PrefactorJson {
    pub rational: RatJson,
    pub radicand: RatJson,
    pub phase_eighths: u8,
    pub two_pi_hbar_halves: i32,
}

pub fn prefactor_to_json(p: &crate::genfun::Prefactor) -> PrefactorJson {
    PrefactorJson {
        rational: rat_to_json(p.rational()),
        radicand: rat_to_json(p.radicand()),
        phase_eighths: p.phase_eighths(),
        two_pi_hbar_halves: p.two_pi_hbar_halves(),
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct KernelJson {
    pub kind: String,
    pub prefactor: PrefactorJson,
    pub delta: Option<RatJson>,
    pub exponent: RatJson,
}

pub fn kernel_to_json(k: &crate::genfun::Kernel) -> KernelJson {
    KernelJson {
        kind: k.kind.name().to_string(),
        prefactor: prefactor_to_json(&k.pref),
        delta: k.delta.as_ref().map(rat_to_json),
        exponent: rat_to_json(&k.phase),
    }
}
