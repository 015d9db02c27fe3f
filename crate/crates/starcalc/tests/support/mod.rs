//! Shared helpers for the integration suites: seeded random symbols.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starcalc::algebra::{GaussianRational, Monomial, PolySymbol, RatSymbol, Variable};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> GaussianRational {
    let num = rng.gen_range(-9i64..=9);
    let den = rng.gen_range(1i64..=4);
    GaussianRational::ratio(num, den)
}

/// A small Gaussian rational, imaginary or complex roughly a third of the
/// time.
pub fn small_coeff(rng: &mut ChaCha8Rng) -> GaussianRational {
    match rng.gen_range(0u8..6) {
        0 | 1 | 2 | 3 => small_rational(rng),
        4 => &small_rational(rng) * &GaussianRational::i(),
        _ => &small_rational(rng) + &(&small_rational(rng) * &GaussianRational::i()),
    }
}

/// Random polynomial over the given variables with per-variable degree at
/// most `max_deg` and at most `max_terms` monomials.
pub fn random_poly(
    rng: &mut ChaCha8Rng,
    vars: &[Variable],
    max_deg: u32,
    max_terms: usize,
) -> PolySymbol {
    let n_terms = rng.gen_range(0..=max_terms);
    let mut acc = PolySymbol::zero();
    for _ in 0..n_terms {
        let mut mono = Monomial::one();
        for v in vars {
            let e = rng.gen_range(0..=max_deg);
            mono = mono.mul(&Monomial::var_pow(v.clone(), e));
        }
        acc = &acc + &PolySymbol::term(small_coeff(rng), mono);
    }
    acc
}

pub fn random_nonzero_poly(
    rng: &mut ChaCha8Rng,
    vars: &[Variable],
    max_deg: u32,
    max_terms: usize,
) -> PolySymbol {
    loop {
        let p = random_poly(rng, vars, max_deg, max_terms);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random normalized fraction; denominators stay small to keep gcd work
/// cheap.
pub fn random_rat(rng: &mut ChaCha8Rng, vars: &[Variable], max_deg: u32) -> RatSymbol {
    let num = random_poly(rng, vars, max_deg, 4);
    let den = if rng.gen_bool(0.5) {
        PolySymbol::one()
    } else {
        random_nonzero_poly(rng, vars, 1, 2)
    };
    RatSymbol::new(num, den).expect("nonzero denominator")
}

/// Random polynomial in `p, q` only (degree bound per variable).
pub fn random_pq_poly(rng: &mut ChaCha8Rng, max_deg: u32, max_terms: usize) -> PolySymbol {
    random_poly(rng, &[Variable::P, Variable::Q], max_deg, max_terms)
}

pub fn pq_vars() -> Vec<Variable> {
    vec![Variable::P, Variable::Q]
}

pub fn full_vars() -> Vec<Variable> {
    vec![
        Variable::P,
        Variable::Q,
        Variable::Hbar,
        Variable::Gamma,
        Variable::param("a"),
        Variable::param("b"),
    ]
}
