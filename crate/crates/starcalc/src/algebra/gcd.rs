//! Multivariate polynomial gcd over the Gaussian rationals.
//!
//! The workhorse is a primitive pseudo-remainder sequence in a main
//! variable with content/primitive-part recursion. Raw PRS recursion is
//! exponential in the number of variables, so three exact reductions run
//! first:
//!
//! * the gcd can only involve variables common to both inputs, and always
//!   contains their shared monomial factor;
//! * a univariate evaluation probe: if the gcd of the images at a random
//!   point has degree zero in the main variable *and* at least one image
//!   kept its full degree, the true gcd is free of that variable (the
//!   image of a divisor divides the image gcd), and the problem reduces
//!   to the contents;
//! * trivial constant cases.
//!
//! The result is canonical: monic with respect to the global monomial
//! order.

use std::collections::BTreeMap;

use super::poly::{Monomial, PolySymbol, Variable};
use super::scalar::GaussianRational;

/// Monic gcd of `a` and `b`; `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &PolySymbol, b: &PolySymbol) -> PolySymbol {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    gcd_inner(a, b).monic()
}

fn gcd_inner(a: &PolySymbol, b: &PolySymbol) -> PolySymbol {
    // shared monomial factor, then restrict to common variables
    let mono = common_monomial(a, b);
    let a1 = a
        .div_exact(&PolySymbol::term(GaussianRational::one(), mono_min(a).clone()))
        .unwrap();
    let b1 = b
        .div_exact(&PolySymbol::term(GaussianRational::one(), mono_min(b).clone()))
        .unwrap();
    let core = gcd_core(&a1, &b1);
    &core * &PolySymbol::term(GaussianRational::one(), mono)
}

/// Componentwise minimum of all exponent vectors: the monomial content.
fn mono_min(p: &PolySymbol) -> Monomial {
    let mut iter = p.terms();
    let first = iter.next().expect("nonzero").0.clone();
    iter.fold(first, |acc, (m, _)| {
        let mut out = Monomial::one();
        for (v, e) in acc.iter() {
            let other = m.exponent(v);
            let keep = (*e).min(other);
            if keep > 0 {
                out = out.mul(&Monomial::var_pow(v.clone(), keep));
            }
        }
        out
    })
}

fn common_monomial(a: &PolySymbol, b: &PolySymbol) -> Monomial {
    let ma = mono_min(a);
    let mb = mono_min(b);
    let mut out = Monomial::one();
    for (v, e) in ma.iter() {
        let keep = (*e).min(mb.exponent(v));
        if keep > 0 {
            out = out.mul(&Monomial::var_pow(v.clone(), keep));
        }
    }
    out
}

fn gcd_core(a: &PolySymbol, b: &PolySymbol) -> PolySymbol {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return PolySymbol::one();
    }
    let common: Vec<Variable> = a
        .vars()
        .intersection(&b.vars())
        .cloned()
        .collect();
    if common.is_empty() {
        return PolySymbol::one();
    }
    gcd_rec(a, b, &common)
}

fn gcd_rec(a: &PolySymbol, b: &PolySymbol, vars: &[Variable]) -> PolySymbol {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let Some((main, rest)) = vars.split_last() else {
        return PolySymbol::one();
    };
    if !a.contains_var(main) || !b.contains_var(main) {
        // the gcd is free of `main`; it must divide every coefficient of
        // the polynomial that does contain it
        if !a.contains_var(main) && !b.contains_var(main) {
            return gcd_rec(a, b, rest);
        }
        let (with, without) = if a.contains_var(main) { (a, b) } else { (b, a) };
        let mut g = without.clone();
        for c in with.univariate_in(main).values() {
            g = gcd_core(&g, c);
            if g.as_constant().is_some() {
                return PolySymbol::one();
            }
        }
        return g;
    }

    if probe_says_coprime_in(main, a, b) {
        // gcd is main-free: reduce to the contents in `main`
        let ca = content_in(a, main);
        let cb = content_in(b, main);
        return gcd_core(&ca, &cb);
    }

    let (cont_a, prim_a) = content_and_primitive(a, main);
    let (cont_b, prim_b) = content_and_primitive(b, main);
    let cont_gcd = gcd_core(&cont_a, &cont_b);

    // primitive PRS in the main variable
    let mut f = prim_a;
    let mut g = prim_b;
    if f.degree_in(main) < g.degree_in(main) {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_zero() {
        let r = pseudo_rem(&f, &g, main);
        f = g;
        g = if r.is_zero() {
            PolySymbol::zero()
        } else {
            content_and_primitive(&r, main).1
        };
    }
    let prim_gcd = content_and_primitive(&f, main).1;
    &cont_gcd * &prim_gcd
}

/// Sound one-sided coprimality test in `main`: evaluate all other
/// variables at a random-ish integer point and take the univariate gcd.
/// Returns `true` only when that image gcd has degree zero while at least
/// one image kept the full degree of its source (so the leading
/// coefficient of the true gcd did not vanish at the point).
fn probe_says_coprime_in(main: &Variable, a: &PolySymbol, b: &PolySymbol) -> bool {
    let mut others: Vec<Variable> = a.vars().union(&b.vars()).cloned().collect();
    others.retain(|v| v != main);
    // a few fixed pseudo-random points; constants chosen to avoid small
    // symmetric coincidences
    for salt in 0..3u64 {
        let mut point = BTreeMap::new();
        for (i, v) in others.iter().enumerate() {
            let val = 2 + ((7 * (i as i64 + 1) + 3 * salt as i64) % 11);
            point.insert(v.clone(), GaussianRational::from_int(val));
        }
        let ia = univariate_image(a, main, &point);
        let ib = univariate_image(b, main, &point);
        let (Some(ia), Some(ib)) = (ia, ib) else { continue };
        let full_a = ia.keys().max().copied() == Some(a.degree_in(main));
        let full_b = ib.keys().max().copied() == Some(b.degree_in(main));
        if !(full_a || full_b) {
            continue;
        }
        if ia.is_empty() || ib.is_empty() {
            continue;
        }
        if univariate_gcd_degree(&ia, &ib) == 0 {
            return true;
        }
    }
    false
}

/// Coefficients of `p` in `main` with every other variable evaluated;
/// `None` when the image vanishes identically.
fn univariate_image(
    p: &PolySymbol,
    main: &Variable,
    point: &BTreeMap<Variable, GaussianRational>,
) -> Option<BTreeMap<u32, GaussianRational>> {
    let mut out: BTreeMap<u32, GaussianRational> = BTreeMap::new();
    for (k, coeff) in p.univariate_in(main) {
        let v = coeff.eval(point);
        if !v.is_zero() {
            out.insert(k, v);
        }
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

/// Remainder of dense-coefficient univariate division; exact field
/// arithmetic cancels the leading term at every step.
fn uni_rem(
    f: &BTreeMap<u32, GaussianRational>,
    g: &BTreeMap<u32, GaussianRational>,
) -> BTreeMap<u32, GaussianRational> {
    let dg = *g.keys().max().expect("nonzero divisor");
    let lg = g.get(&dg).cloned().unwrap();
    let mut r = f.clone();
    while let Some(&dr) = r.keys().max() {
        if dr < dg {
            break;
        }
        let lr = r.get(&dr).cloned().unwrap();
        let scale = &lr / &lg;
        for (k, c) in g {
            let idx = k + dr - dg;
            let sub = c * &scale;
            let cur = r.remove(&idx).unwrap_or_else(GaussianRational::zero);
            let val = &cur - &sub;
            if !val.is_zero() {
                r.insert(idx, val);
            }
        }
    }
    r
}

fn univariate_gcd_degree(
    a: &BTreeMap<u32, GaussianRational>,
    b: &BTreeMap<u32, GaussianRational>,
) -> u32 {
    let mut f = a.clone();
    let mut g = b.clone();
    while !g.is_empty() {
        let r = uni_rem(&f, &g);
        f = g;
        g = r;
    }
    f.keys().max().copied().unwrap_or(0)
}

fn content_in(f: &PolySymbol, main: &Variable) -> PolySymbol {
    let coeffs = f.univariate_in(main);
    let mut content = PolySymbol::zero();
    for c in coeffs.values() {
        content = gcd_core(&content, c);
        if content.as_constant().is_some() && !content.is_zero() {
            return PolySymbol::one();
        }
    }
    content
}

/// Split `f` viewed in `K[rest][main]` into (content, primitive part).
fn content_and_primitive(f: &PolySymbol, main: &Variable) -> (PolySymbol, PolySymbol) {
    if f.is_zero() {
        return (PolySymbol::zero(), PolySymbol::zero());
    }
    let content = content_in(f, main);
    if content.is_one() {
        return (content, f.clone());
    }
    let prim = f
        .div_exact(&content)
        .expect("content must divide the polynomial");
    (content, prim)
}

/// Pseudo-remainder of `f` by `g` in the variable `v`.
fn pseudo_rem(f: &PolySymbol, g: &PolySymbol, v: &Variable) -> PolySymbol {
    let dg = g.degree_in(v);
    let g_uni = g.univariate_in(v);
    let lc_g = g_uni.get(&dg).cloned().expect("nonzero divisor");
    let mut r = f.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v);
        if dr < dg {
            break;
        }
        let r_uni = r.univariate_in(v);
        let lc_r = r_uni.get(&dr).cloned().unwrap();
        let shift = PolySymbol::var_pow(v.clone(), dr - dg);
        r = &(&r * &lc_g) - &(&(&lc_r * &shift) * g);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::GaussianRational;

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
    fn gcd_of_common_factor() {
        // gcd((p+q)(p-q), (p-q)^2) = p - q
        let d = &p() - &q();
        let a = &(&p() + &q()) * &d;
        let b = &d * &d;
        assert_eq!(poly_gcd(&a, &b), d);
    }

    #[test]
    fn gcd_powers_of_binomial() {
        let w = &PolySymbol::one() + &(&gamma() * &p());
        let a = &w.pow(3) * &q();
        let b = w.clone();
        assert_eq!(poly_gcd(&a, &b), w);
    }

    #[test]
    fn coprime_gives_one() {
        let a = &p() + &PolySymbol::one();
        let b = &q() + &PolySymbol::from_int(2);
        assert!(poly_gcd(&a, &b).is_one());
    }

    #[test]
    fn gcd_is_monic() {
        let d = (&p() - &q()).scale(&GaussianRational::from_int(3));
        let a = &d * &p();
        let b = &d * &q();
        let g = poly_gcd(&a, &b);
        assert_eq!(g, &p() - &q());
    }

    #[test]
    fn gcd_with_zero() {
        let a = (&p() + &q()).scale(&GaussianRational::from_int(2));
        assert_eq!(poly_gcd(&a, &PolySymbol::zero()), &p() + &q());
        assert!(poly_gcd(&PolySymbol::zero(), &PolySymbol::zero()).is_zero());
    }

    #[test]
    fn monomial_content_shared() {
        // gcd(p^2 q gamma, p q^2) = p q
        let a = &(&p().pow(2) * &q()) * &gamma();
        let b = &p() * &q().pow(2);
        assert_eq!(poly_gcd(&a, &b), &p() * &q());
    }

    #[test]
    fn probe_does_not_lose_factors() {
        // a factor whose leading coefficient vanishes at simple points
        let a_param = PolySymbol::var(Variable::param("a"));
        let g = &(&a_param * &p()) + &PolySymbol::one();
        let f1 = &g * &(&p() + &q());
        let f2 = &g * &(&p() - &q());
        assert_eq!(poly_gcd(&f1, &f2), g.monic());
    }

    #[test]
    fn many_variable_coprime_is_fast() {
        // six-variable coprime pair: the evaluation probe short-circuits
        let vars = [
            Variable::P,
            Variable::Q,
            Variable::Hbar,
            Variable::Gamma,
            Variable::param("a"),
            Variable::param("b"),
        ];
        let mut a = PolySymbol::one();
        let mut b = PolySymbol::from_int(2);
        for (i, v) in vars.iter().enumerate() {
            a = &a + &PolySymbol::var_pow(v.clone(), 1 + (i as u32 % 3));
            b = &b + &(&PolySymbol::var(v.clone()) * &PolySymbol::from_int(i as i64 + 3));
        }
        let g = poly_gcd(&a, &b);
        assert!(g.is_one());
    }
}
