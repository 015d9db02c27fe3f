//! Cross-module laws: monomial images against the star calculus, the
//! Moyal–Lie anti-homomorphism, and flow composition.

mod support;

use std::collections::BTreeMap;

use starcalc::algebra::{GammaSeries, GaussianRational, PolySymbol, RatSymbol, Variable};
use starcalc::flow::{flow, FlowSign};
use starcalc::star::{check_canonical_pair, moyal_bracket};
use starcalc::weyl::{
    image_of_monomial, moyal_lie_vector, operator_commutator, GeneratorExpansion, WeylMonomial,
};
use support::*;

#[test]
fn monomial_images_act_as_right_moyal_brackets() {
    // apply(S_{m,n}, f) = {f, p^m q^n}_M for all m+n <= 6 on random
    // degree-6 polynomials
    let mut r = rng(31);
    for m in 0..=6u32 {
        for n in 0..=(6 - m) {
            let s = image_of_monomial(WeylMonomial::new(m, n));
            let target = RatSymbol::from(WeylMonomial::new(m, n).symbol());
            for _ in 0..3 {
                let f = RatSymbol::from(random_pq_poly(&mut r, 3, 4));
                let lhs = s.apply(&f);
                let rhs = moyal_bracket(&f, &target, None).unwrap();
                assert_eq!(lhs, rhs, "S_{{{m},{n}}} on {f}");
            }
        }
    }
}

#[test]
fn moyal_lie_vector_is_linear() {
    let mut r = rng(32);
    for _ in 0..10 {
        let alpha = small_coeff(&mut r);
        let beta = small_coeff(&mut r);
        let mut a = GeneratorExpansion::new();
        a.insert(2, 1, PolySymbol::constant(small_coeff(&mut r)));
        a.insert(1, 1, PolySymbol::constant(small_coeff(&mut r)));
        let mut b = GeneratorExpansion::new();
        b.insert(0, 2, PolySymbol::constant(small_coeff(&mut r)));
        b.insert(2, 1, PolySymbol::constant(small_coeff(&mut r)));

        let combined = GeneratorExpansion::from_symbol(
            &(&a.to_symbol().scale(&alpha) + &b.to_symbol().scale(&beta)),
        );
        let lhs = moyal_lie_vector(&combined);
        let rhs = moyal_lie_vector(&a)
            .scale(&RatSymbol::constant(alpha))
            .add(&moyal_lie_vector(&b).scale(&RatSymbol::constant(beta)));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn anti_homomorphism_on_low_monomials() {
    // V_{[A,B]} = -[V_A, V_B] for all ordered pairs drawn from
    // {p^2, q^2, pq, p^2 q, p q^2}
    let basis = [
        WeylMonomial::new(2, 0),
        WeylMonomial::new(0, 2),
        WeylMonomial::new(1, 1),
        WeylMonomial::new(2, 1),
        WeylMonomial::new(1, 2),
    ];
    for a in &basis {
        for b in &basis {
            let sym_a = RatSymbol::from(a.symbol());
            let sym_b = RatSymbol::from(b.symbol());
            // the symbol of the operator commutator is the Moyal bracket
            let comm_symbol = moyal_bracket(&sym_a, &sym_b, None).unwrap();
            let expansion = GeneratorExpansion::from_symbol(
                comm_symbol.as_poly().expect("polynomial"),
            );
            let lhs = moyal_lie_vector(&expansion);
            let va = moyal_lie_vector(&GeneratorExpansion::scalar(a.m, a.n, GaussianRational::one()));
            let vb = moyal_lie_vector(&GeneratorExpansion::scalar(b.m, b.n, GaussianRational::one()));
            let rhs = operator_commutator(&va, &vb).neg();
            assert_eq!(lhs, rhs, "pair ({},{}) x ({},{})", a.m, a.n, b.m, b.n);
        }
    }
}

#[test]
fn compose_matches_sequential_application() {
    let mut r = rng(33);
    let s21 = image_of_monomial(WeylMonomial::new(2, 1));
    let s12 = image_of_monomial(WeylMonomial::new(1, 2));
    let composed = s21.compose(&s12);
    for _ in 0..10 {
        let f = RatSymbol::from(random_pq_poly(&mut r, 3, 4));
        assert_eq!(composed.apply(&f), s21.apply(&s12.apply(&f)));
    }
}

#[test]
fn flow_group_law_modulo_truncation() {
    // e^{gamma V} e^{s V} f = e^{(gamma+s) V} f up to combined degree N
    let order = 5u32;
    let v = image_of_monomial(WeylMonomial::new(2, 1));
    let s_var = Variable::param("s");
    for target in [RatSymbol::var(Variable::P), RatSymbol::var(Variable::Q)] {
        let once = flow(&v, &target, order, FlowSign::Minus).unwrap();
        // rename gamma -> s in the once-flowed series
        let mut rename = BTreeMap::new();
        rename.insert(Variable::Gamma, PolySymbol::var(s_var.clone()));
        let renamed = once.series.to_poly().substitute(&rename);
        // flow the renamed series again in gamma
        let twice = flow(&v, &RatSymbol::from(&renamed), order, FlowSign::Minus)
            .unwrap()
            .series
            .to_poly();
        // compare against gamma -> gamma + s inside the single flow
        let mut shift = BTreeMap::new();
        shift.insert(
            Variable::Gamma,
            &PolySymbol::var(Variable::Gamma) + &PolySymbol::var(s_var.clone()),
        );
        let shifted = once.series.to_poly().substitute(&shift);
        let diff = &twice - &shifted;
        // every surviving monomial must exceed the truncation budget
        for (mono, _) in diff.terms() {
            let total = mono.exponent(&Variable::Gamma) + mono.exponent(&s_var);
            assert!(
                total > order,
                "group-law residual below truncation: {mono:?} in {diff}"
            );
        }
    }
}

#[test]
fn flow_images_stay_canonical() {
    let v = image_of_monomial(WeylMonomial::new(2, 1));
    for order in [2u32, 4, 6] {
        let pf = flow(&v, &RatSymbol::var(Variable::P), order, FlowSign::Minus).unwrap();
        let qf = flow(&v, &RatSymbol::var(Variable::Q), order, FlowSign::Minus).unwrap();
        let report =
            starcalc::star::check_canonical_pair_series(&pf.series, &qf.series, 2).unwrap();
        assert!(report.is_canonical, "order {order}");
        // the rational-input path agrees
        let p_poly = RatSymbol::from(pf.series.to_poly());
        let q_poly = RatSymbol::from(qf.series.to_poly());
        let direct = check_canonical_pair(&p_poly, &q_poly, 2, Some(order)).unwrap();
        assert_eq!(report, direct);
    }
}

#[test]
fn flows_of_coordinates_are_hbar_free() {
    // the cubic image S_{2,1} has an hbar^2 correction term, but it
    // annihilates every iterate of p and q (those stay q-linear), so the
    // coordinate flows are hbar-free through any order
    let s21 = image_of_monomial(WeylMonomial::new(2, 1));
    for target in [RatSymbol::var(Variable::P), RatSymbol::var(Variable::Q)] {
        let f = flow(&s21, &target, 8, FlowSign::Minus).unwrap();
        assert!(f.hbar_free);
        assert!(f.series.hbar_free());
    }
    // quadratic generators are first-order vector fields; their flows are
    // hbar-free on any polynomial target
    let mut quad = GeneratorExpansion::new();
    quad.insert(2, 0, PolySymbol::from_int(1));
    quad.insert(0, 2, PolySymbol::constant(GaussianRational::ratio(3, 2)));
    quad.insert(1, 1, PolySymbol::from_int(-2));
    let v = moyal_lie_vector(&quad);
    let target = &RatSymbol::var(Variable::P) * &RatSymbol::var(Variable::Q);
    let f = flow(&v, &target, 6, FlowSign::Plus).unwrap();
    assert!(f.hbar_free);
}

#[test]
fn mixed_cubic_quadratic_flows_can_pick_up_hbar() {
    // the boundary of the previous law: mixing the cubic generator with a
    // q^2 term feeds q-quadratic iterates into the hbar^2 correction of
    // S_{2,1}, and the flow of q acquires genuine hbar dependence
    let mut gen = GeneratorExpansion::new();
    gen.insert(2, 1, PolySymbol::from_int(1));
    gen.insert(0, 2, PolySymbol::constant(GaussianRational::ratio(3, 2)));
    let v = moyal_lie_vector(&gen);
    let f = flow(&v, &RatSymbol::var(Variable::Q), 6, FlowSign::Minus).unwrap();
    assert!(!f.hbar_free);
}

#[test]
fn series_bracket_distributes_over_orders() {
    // poisson on series equals poisson of reassembled polynomials
    let mut r = rng(34);
    for _ in 0..10 {
        let a = random_poly(
            &mut r,
            &[Variable::P, Variable::Q, Variable::Gamma],
            2,
            4,
        );
        let b = random_poly(
            &mut r,
            &[Variable::P, Variable::Q, Variable::Gamma],
            2,
            4,
        );
        let n = 4;
        let sa = GammaSeries::from_poly(&a, n);
        let sb = GammaSeries::from_poly(&b, n);
        let series_result = starcalc::star::poisson_series(&sa, &sb).to_poly();
        let direct = starcalc::star::poisson_bracket(&RatSymbol::from(&a), &RatSymbol::from(&b));
        let direct_truncated = GammaSeries::from_poly(
            direct.as_poly().expect("polynomial"),
            n,
        )
        .to_poly();
        assert_eq!(series_result, direct_truncated);
    }
}
