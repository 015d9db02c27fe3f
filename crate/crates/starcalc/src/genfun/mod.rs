//! Generating functions of canonical transformations.
//!
//! Given an `hbar`-free canonical map `(p, q) -> (P, Q)`, the gradient
//! system determines the phase `T(p, q)` of the transformation symbol
//! `u = e^{2iT/hbar}` from the forward map alone: inverse-map partials are
//! obtained from the adjugate of the forward Jacobian (whose determinant
//! is 1 for a canonical map), so no user-supplied inverse is needed. The
//! star-eigen residuals `u * Q - q * u` and `u * P - p * u` certify the
//! result exactly.
//!
//! Closed forms are provided for the linear symplectic family
//! (`u = (2/sqrt(a+d+2)) exp{2i[b q^2 - c p^2 + (a-d) p q]/((a+d+2) hbar)}`)
//! and verified against the eigen equations; the `Tr g = -2` family is
//! rejected with a structured error.

pub mod expsym;
pub mod kernel;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{AlgebraError, GaussianRational, PolySymbol, RatSymbol, Variable};
use crate::star::StarError;

pub use expsym::{ExpSymbol, Prefactor};
pub use kernel::{classical_genfun_check, kernel_transform, Kernel, KernelKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenFunError {
    #[error("the map is not canonical: {{P, Q}} != -1")]
    NotCanonical,
    #[error("input depends on hbar")]
    HbarDependentInput,
    #[error("the scalar 2 + d_P p + d_Q q vanishes identically")]
    SingularDenominator,
    #[error("mixed partials differ; the input pair is not a gradient")]
    ExactnessFailure,
    #[error("term-wise integration leaves the supported ring")]
    NonPolynomialAntiderivative,
    #[error("T depends on hbar")]
    HbarDependentT,
    #[error("Tr g = -2: the closed form is singular for this family")]
    TracePlusTwoSingular,
    #[error("exponent has unsupported degree {degree} in the integration variable")]
    UnsupportedExponentDegree { degree: u32 },
    #[error("prefactor depends on the integration variable")]
    PrefactorDependsOnVariable,
    #[error("two pending delta factors in one transform")]
    DeltaCollision,
    #[error("kernel kind does not define classical generating-function relations")]
    UnsupportedKernelKind,
    #[error("extracted generating function retains hbar")]
    HbarResidue,
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An `hbar`-free canonical transformation, validated at construction:
/// `{P, Q} = -1` (equivalently, forward Jacobian determinant `+1`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalPair {
    p_out: RatSymbol,
    q_out: RatSymbol,
}

impl CanonicalPair {
    pub fn new(p_out: RatSymbol, q_out: RatSymbol) -> Result<Self, GenFunError> {
        if p_out.contains_var(&Variable::Hbar) || q_out.contains_var(&Variable::Hbar) {
            return Err(GenFunError::HbarDependentInput);
        }
        if crate::star::poisson_bracket(&p_out, &q_out) != RatSymbol::from_int(-1) {
            return Err(GenFunError::NotCanonical);
        }
        Ok(CanonicalPair { p_out, q_out })
    }

    pub fn identity() -> Self {
        CanonicalPair {
            p_out: RatSymbol::var(Variable::P),
            q_out: RatSymbol::var(Variable::Q),
        }
    }

    /// The linear-potential family `(p, q + a p^2)`.
    pub fn linear_potential(a: &RatSymbol) -> Self {
        let p = RatSymbol::var(Variable::P);
        let q = RatSymbol::var(Variable::Q);
        CanonicalPair {
            p_out: p.clone(),
            q_out: &q + &(a * &(&p * &p)),
        }
    }

    pub fn p_out(&self) -> &RatSymbol {
        &self.p_out
    }

    pub fn q_out(&self) -> &RatSymbol {
        &self.q_out
    }
}

/// A unit-determinant 2x2 matrix of rational symbols. Construction
/// verifies `ad - bc = 1` exactly, so symbolic entries must already carry
/// the determinant reduction (see [`Sl2::symbolic`]).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sl2 {
    pub a: RatSymbol,
    pub b: RatSymbol,
    pub c: RatSymbol,
    pub d: RatSymbol,
}

impl Sl2 {
    pub fn new(a: RatSymbol, b: RatSymbol, c: RatSymbol, d: RatSymbol) -> Result<Self, GenFunError> {
        let det = &(&a * &d) - &(&b * &c);
        if det != RatSymbol::one() {
            return Err(GenFunError::NotCanonical);
        }
        Ok(Sl2 { a, b, c, d })
    }

    pub fn identity() -> Self {
        Sl2 {
            a: RatSymbol::one(),
            b: RatSymbol::zero(),
            c: RatSymbol::zero(),
            d: RatSymbol::one(),
        }
    }

    /// Fully symbolic family with parameters `a, b, c` and the determinant
    /// relation substituted as `d = (1 + bc)/a`.
    pub fn symbolic() -> Self {
        let a = RatSymbol::from(PolySymbol::var(Variable::param("a")));
        let b = RatSymbol::from(PolySymbol::var(Variable::param("b")));
        let c = RatSymbol::from(PolySymbol::var(Variable::param("c")));
        let d = &(&RatSymbol::one() + &(&b * &c)) / &a;
        Sl2 { a, b, c, d }
    }

    pub fn from_rationals(entries: [(i64, i64); 4]) -> Result<Self, GenFunError> {
        let mk = |(n, d): (i64, i64)| RatSymbol::constant(GaussianRational::ratio(n, d));
        Sl2::new(mk(entries[0]), mk(entries[1]), mk(entries[2]), mk(entries[3]))
    }

    /// The induced map `P = a p + b q`, `Q = c p + d q`.
    pub fn pair(&self) -> Result<CanonicalPair, GenFunError> {
        let p = RatSymbol::var(Variable::P);
        let q = RatSymbol::var(Variable::Q);
        CanonicalPair::new(
            &(&self.a * &p) + &(&self.b * &q),
            &(&self.c * &p) + &(&self.d * &q),
        )
    }

    pub fn trace_plus_two(&self) -> RatSymbol {
        &(&self.a + &self.d) + &RatSymbol::from_int(2)
    }
}

struct Jacobian {
    p_p: RatSymbol,
    p_q: RatSymbol,
    q_p: RatSymbol,
    q_q: RatSymbol,
}

fn jacobian(ct: &CanonicalPair) -> Jacobian {
    Jacobian {
        p_p: ct.p_out.partial(&Variable::P),
        p_q: ct.p_out.partial(&Variable::Q),
        q_p: ct.q_out.partial(&Variable::P),
        q_q: ct.q_out.partial(&Variable::Q),
    }
}

/// The gradient `(d_p T, d_q T)` of the transformation phase, computed
/// from the forward map with adjugate inverse partials
/// `d_P p = d_q Q`, `d_Q q = d_p P`, `d_P q = -d_p Q`, `d_Q p = -d_q P`.
pub fn gradient_t(ct: &CanonicalPair) -> Result<(RatSymbol, RatSymbol), GenFunError> {
    let j = jacobian(ct);
    // s = 2 + d_P p + d_Q q
    let s = &(&RatSymbol::from_int(2) + &j.q_q) + &j.p_p;
    if s.is_zero() {
        return Err(GenFunError::SingularDenominator);
    }
    let q = RatSymbol::var(Variable::Q);
    let p = RatSymbol::var(Variable::P);
    let dq = &q - &ct.q_out; // q - Q
    let dp = &ct.p_out - &p; // P - p
    let one = RatSymbol::one();
    let gp = &(&(&(&one + &j.p_p) * &dq) + &(&j.q_p * &dp)) / &s;
    let gq = &(&(&j.p_q * &dq) + &(&(&one + &j.q_q) * &dp)) / &s;
    Ok((gp, gq))
}

fn antiderivative(f: &RatSymbol, v: &Variable) -> Result<RatSymbol, GenFunError> {
    if f.is_zero() {
        return Ok(RatSymbol::zero());
    }
    if f.den().contains_var(v) {
        return Err(GenFunError::NonPolynomialAntiderivative);
    }
    let mut num = PolySymbol::zero();
    for (k, c) in f.num().univariate_in(v) {
        let scaled = c.scale(
            &GaussianRational::from_int(k as i64 + 1).inv().expect("nonzero"),
        );
        num = &num
            + &(&scaled * &PolySymbol::var_pow(v.clone(), k + 1));
    }
    Ok(RatSymbol::new(num, f.den().clone())?)
}

/// Reconstruct `T` from its gradient with the normalization `T(0,0) = 0`
/// (skipped when the denominator vanishes at the origin, in which case no
/// constant term can arise from term-wise integration anyway).
pub fn integrate_gradient(gp: &RatSymbol, gq: &RatSymbol) -> Result<RatSymbol, GenFunError> {
    if gp.partial(&Variable::Q) != gq.partial(&Variable::P) {
        return Err(GenFunError::ExactnessFailure);
    }
    let t0 = antiderivative(gp, &Variable::P)?;
    let rest = gq - &t0.partial(&Variable::Q);
    if rest.contains_var(&Variable::P) {
        return Err(GenFunError::ExactnessFailure);
    }
    let t1 = antiderivative(&rest, &Variable::Q)?;
    let mut t = &t0 + &t1;
    let mut origin = BTreeMap::new();
    origin.insert(Variable::P, RatSymbol::zero());
    origin.insert(Variable::Q, RatSymbol::zero());
    if let Ok(at_origin) = t.substitute(&origin) {
        t = &t - &at_origin;
    }
    Ok(t)
}

/// `u = e^{2iT/hbar}` with unit prefactor; `T` must be `hbar`-free.
pub fn build_u(t: &RatSymbol) -> Result<ExpSymbol, GenFunError> {
    if t.contains_var(&Variable::Hbar) {
        return Err(GenFunError::HbarDependentT);
    }
    let two_i_over_hbar =
        RatSymbol::var(Variable::Hbar).inv()?.scale(&GaussianRational::imag_ratio(2, 1));
    Ok(ExpSymbol::from_phase(&two_i_over_hbar * t))
}

/// `true` iff `d T / d hbar = 0` exactly.
pub fn hbar_independence_check(t: &RatSymbol) -> bool {
    t.partial(&Variable::Hbar).is_zero()
}

/// The phase of the linear symplectic transformation symbol:
/// `T = [b q^2 - c p^2 + (a - d) p q] / (a + d + 2)`.
pub fn sl2_t(g: &Sl2) -> Result<RatSymbol, GenFunError> {
    let s = g.trace_plus_two();
    if s.is_zero() {
        return Err(GenFunError::TracePlusTwoSingular);
    }
    let p = RatSymbol::var(Variable::P);
    let q = RatSymbol::var(Variable::Q);
    let num = &(&(&g.b * &(&q * &q)) - &(&g.c * &(&p * &p)))
        + &(&(&g.a - &g.d) * &(&p * &q));
    Ok(&num / &s)
}

/// Closed-form symbol of a linear symplectic transformation,
/// `u = (2/sqrt(a+d+2)) e^{2iT/hbar}`, normalized so the identity maps to
/// `u = 1`.
pub fn sl2_u(g: &Sl2) -> Result<ExpSymbol, GenFunError> {
    let t = sl2_t(g)?;
    let s = g.trace_plus_two();
    let u = build_u(&t)?;
    let pref = Prefactor::from_rational(RatSymbol::from_int(2)).mul_sqrt(&s.inv()?);
    Ok(ExpSymbol { pref: pref.mul(&u.pref), phase: u.phase })
}

fn half_i_hbar() -> RatSymbol {
    RatSymbol::var(Variable::Hbar).scale(&GaussianRational::imag_ratio(1, 2))
}

/// Sum of exponential symbols sharing one phase and radical bookkeeping.
/// A vanished side lost its radical bookkeeping to normalization, so it
/// contributes only its (zero) rational part.
fn combine_same_phase(a: &ExpSymbol, b: &ExpSymbol, subtract: bool) -> ExpSymbol {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if subtract {
            b.scale(&RatSymbol::from_int(-1))
        } else {
            b.clone()
        };
    }
    debug_assert_eq!(a.phase, b.phase, "terms must share the exponential");
    debug_assert_eq!(a.pref.radicand(), b.pref.radicand());
    debug_assert_eq!(a.pref.phase_eighths(), b.pref.phase_eighths());
    debug_assert_eq!(a.pref.two_pi_hbar_halves(), b.pref.two_pi_hbar_halves());
    let rational = if subtract {
        a.pref.rational() - b.pref.rational()
    } else {
        a.pref.rational() + b.pref.rational()
    };
    ExpSymbol { pref: a.pref.replace_rational(rational), phase: a.phase.clone() }
}

fn sub_same_phase(a: &ExpSymbol, b: &ExpSymbol) -> ExpSymbol {
    combine_same_phase(a, b, true)
}

fn add_same_phase(a: &ExpSymbol, b: &ExpSymbol) -> ExpSymbol {
    combine_same_phase(a, b, false)
}

/// `f * u` or `u * f` for a `(p,q)`-polynomial symbol `f` against an
/// exponential symbol. Derivatives of `exp(phi)` close in
/// `RatSymbol * exp(phi)`, so the series terminates at the polynomial
/// degree of `f`.
fn star_exp(f: &RatSymbol, u: &ExpSymbol, exp_on_right: bool) -> Result<ExpSymbol, GenFunError> {
    let Some(degree) = f.pq_poly_degree() else {
        return Err(GenFunError::Star(StarError::NonTerminatingSeries));
    };
    if u.pref.radicand().contains_var(&Variable::P)
        || u.pref.radicand().contains_var(&Variable::Q)
    {
        return Err(GenFunError::PrefactorDependsOnVariable);
    }
    // table[(a, b)] = coefficient of exp(phi) in d_q^a d_p^b u
    let mut table: BTreeMap<(u32, u32), RatSymbol> = BTreeMap::new();
    table.insert((0, 0), u.pref.rational().clone());
    let phi_q = u.phase.partial(&Variable::Q);
    let phi_p = u.phase.partial(&Variable::P);
    for a in 0..=degree {
        for b in 0..=degree {
            if a == 0 && b == 0 {
                continue;
            }
            let prev = if b > 0 {
                let r = table.get(&(a, b - 1)).unwrap();
                &r.partial(&Variable::P) + &(r * &phi_p)
            } else {
                let r = table.get(&(a - 1, 0)).unwrap();
                &r.partial(&Variable::Q) + &(r * &phi_q)
            };
            table.insert((a, b), prev);
        }
    }

    let mut acc = RatSymbol::zero();
    for n in 0..=degree {
        // (i hbar / 2)^n / n!
        let mut denom = GaussianRational::one();
        for j in 1..=n {
            denom = &denom * &GaussianRational::from_int(2 * j as i64);
        }
        let weight = RatSymbol::from(PolySymbol::var_pow(Variable::Hbar, n))
            .scale(&(&GaussianRational::i().pow(n) * &denom.inv().unwrap()));
        for k in 0..=n {
            // f [D]^n u when the exponential is on the right,
            // u [D]^n f when it is on the left; k counts d_p on the left slot
            let (f_dq, f_dp, u_dq, u_dp) = if exp_on_right {
                (n - k, k, k, n - k)
            } else {
                (k, n - k, n - k, k)
            };
            let mut fm = f.clone();
            for _ in 0..f_dq {
                fm = fm.partial(&Variable::Q);
            }
            for _ in 0..f_dp {
                fm = fm.partial(&Variable::P);
            }
            if fm.is_zero() {
                continue;
            }
            let um = table.get(&(u_dq, u_dp)).unwrap();
            if um.is_zero() {
                continue;
            }
            let mut c = crate::algebra::binomial(n, k);
            if k % 2 == 1 {
                c = -c;
            }
            acc = &acc + &(&(&fm * um) * &weight).scale(&c);
        }
    }
    Ok(ExpSymbol { pref: u.pref.replace_rational(acc), phase: u.phase.clone() })
}

/// `u * f` for `(p,q)`-polynomial `f`.
pub fn star_exp_left(u: &ExpSymbol, f: &RatSymbol) -> Result<ExpSymbol, GenFunError> {
    star_exp(f, u, false)
}

/// `f * u` for `(p,q)`-polynomial `f`.
pub fn star_exp_right(f: &RatSymbol, u: &ExpSymbol) -> Result<ExpSymbol, GenFunError> {
    star_exp(f, u, true)
}

/// Residuals of the eigen-equations `u * Q = q * u` and `u * P = p * u`,
/// returned in that order. Both vanish exactly iff `u` generates the
/// transformation.
pub fn star_eigen_residuals(
    u: &ExpSymbol,
    ct: &CanonicalPair,
) -> Result<(ExpSymbol, ExpSymbol), GenFunError> {
    let q = RatSymbol::var(Variable::Q);
    let p = RatSymbol::var(Variable::P);
    let r_q = sub_same_phase(&star_exp_left(u, ct.q_out())?, &star_exp_right(&q, u)?);
    let r_p = sub_same_phase(&star_exp_left(u, ct.p_out())?, &star_exp_right(&p, u)?);
    Ok((r_q, r_p))
}

/// The sufficient (not necessary) covariance conditions
/// `(Q - (i hbar/2) d_P) u = (q + (i hbar/2) d_p) u` and
/// `(P + (i hbar/2) d_Q) u = (p - (i hbar/2) d_q) u`,
/// with `d_P, d_Q` rewritten through the adjugate Jacobian. A `false`
/// here does not refute `hbar`-independence.
pub fn covariance_condition_check(
    u: &ExpSymbol,
    ct: &CanonicalPair,
) -> Result<bool, GenFunError> {
    let j = jacobian(ct);
    let du_p = u.partial(&Variable::P);
    let du_q = u.partial(&Variable::Q);
    // d_P = (d_q Q) d_p - (d_p Q) d_q ; d_Q = -(d_q P) d_p + (d_p P) d_q
    let du_cap_p = sub_same_phase(&du_p.scale(&j.q_q), &du_q.scale(&j.q_p));
    let du_cap_q = sub_same_phase(&du_q.scale(&j.p_p), &du_p.scale(&j.p_q));
    let ih2 = half_i_hbar();
    let p = RatSymbol::var(Variable::P);
    let q = RatSymbol::var(Variable::Q);

    let lhs1 = sub_same_phase(&u.scale(ct.q_out()), &du_cap_p.scale(&ih2));
    let rhs1 = add_same_phase(&u.scale(&q), &du_p.scale(&ih2));
    let lhs2 = add_same_phase(&u.scale(ct.p_out()), &du_cap_q.scale(&ih2));
    let rhs2 = sub_same_phase(&u.scale(&p), &du_q.scale(&ih2));

    Ok(sub_same_phase(&lhs1, &rhs1).is_zero() && sub_same_phase(&lhs2, &rhs2).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> RatSymbol {
        RatSymbol::var(Variable::P)
    }
    fn q() -> RatSymbol {
        RatSymbol::var(Variable::Q)
    }
    fn param(name: &str) -> RatSymbol {
        RatSymbol::from(PolySymbol::var(Variable::param(name)))
    }

    fn linear_potential() -> CanonicalPair {
        CanonicalPair::linear_potential(&param("a"))
    }

    fn moebius_pair() -> CanonicalPair {
        let gamma = RatSymbol::var(Variable::Gamma);
        let w = &RatSymbol::one() + &(&gamma * &p());
        CanonicalPair::new(&p() / &w, &(&q() * &w) * &w).unwrap()
    }

    #[test]
    fn canonical_pair_validation() {
        assert!(CanonicalPair::new(p(), q()).is_ok());
        // {p, q^2} = -2q is not canonical
        assert!(matches!(
            CanonicalPair::new(p(), &q() * &q()),
            Err(GenFunError::NotCanonical)
        ));
        let hbar = RatSymbol::var(Variable::Hbar);
        assert!(matches!(
            CanonicalPair::new(&p() + &hbar, q()),
            Err(GenFunError::HbarDependentInput)
        ));
    }

    #[test]
    fn gradient_identity_is_zero() {
        let (gp, gq) = gradient_t(&CanonicalPair::identity()).unwrap();
        assert!(gp.is_zero() && gq.is_zero());
        let t = integrate_gradient(&gp, &gq).unwrap();
        assert!(t.is_zero());
        let u = build_u(&t).unwrap();
        assert!(u.is_one());
    }

    #[test]
    fn gradient_linear_potential() {
        // (p, q + a p^2) has gradient (-a p^2/2, 0) and T = -a p^3/6
        let ct = linear_potential();
        let (gp, gq) = gradient_t(&ct).unwrap();
        let expected_gp = (&param("a") * &(&p() * &p())).scale(&GaussianRational::ratio(-1, 2));
        assert_eq!(gp, expected_gp);
        assert!(gq.is_zero());
        let t = integrate_gradient(&gp, &gq).unwrap();
        let expected_t =
            (&param("a") * &(&(&p() * &p()) * &p())).scale(&GaussianRational::ratio(-1, 6));
        assert_eq!(t, expected_t);
        assert!(hbar_independence_check(&t));
        // u = exp(-i a p^3 / (3 hbar))
        let u = build_u(&t).unwrap();
        let expected_phase = &(&param("a") * &(&(&p() * &p()) * &p()))
            .scale(&GaussianRational::imag_ratio(-1, 3))
            / &RatSymbol::var(Variable::Hbar);
        assert_eq!(u.phase, expected_phase);
        assert!(u.pref.is_one());
        // the eigen residuals certify u
        let (rq, rp) = star_eigen_residuals(&u, &ct).unwrap();
        assert!(rq.is_zero(), "residual in Q: {rq}");
        assert!(rp.is_zero(), "residual in P: {rp}");
    }

    #[test]
    fn sl2_symbolic_pipeline() {
        let g = Sl2::symbolic();
        let ct = g.pair().unwrap();
        let (gp, gq) = gradient_t(&ct).unwrap();
        // d_p T = [(a-d) q - 2 c p]/(a+d+2), d_q T = [(a-d) p + 2 b q]/(a+d+2)
        let s = g.trace_plus_two();
        let a_minus_d = &g.a - &g.d;
        let expected_gp = &(&(&a_minus_d * &q())
            - &(&g.c * &p()).scale(&GaussianRational::from_int(2)))
            / &s;
        let expected_gq = &(&(&a_minus_d * &p())
            + &(&g.b * &q()).scale(&GaussianRational::from_int(2)))
            / &s;
        assert_eq!(gp, expected_gp);
        assert_eq!(gq, expected_gq);
        let t = integrate_gradient(&gp, &gq).unwrap();
        assert_eq!(t, sl2_t(&g).unwrap());
        assert!(hbar_independence_check(&t));
        // the closed-form symbol solves both eigen equations
        let u = sl2_u(&g).unwrap();
        let (rq, rp) = star_eigen_residuals(&u, &ct).unwrap();
        assert!(rq.is_zero(), "residual in Q: {rq}");
        assert!(rp.is_zero(), "residual in P: {rp}");
    }

    #[test]
    fn sl2_shears_and_rotation() {
        // b-shear: u = exp(i b q^2 / (2 hbar))
        let b = param("b");
        let shear_b = Sl2::new(RatSymbol::one(), b.clone(), RatSymbol::zero(), RatSymbol::one())
            .unwrap();
        let u = sl2_u(&shear_b).unwrap();
        assert!(u.pref.is_one());
        let expected = &(&b * &(&q() * &q())).scale(&GaussianRational::imag_ratio(1, 2))
            / &RatSymbol::var(Variable::Hbar);
        assert_eq!(u.phase, expected);
        let (rq, rp) = star_eigen_residuals(&u, &shear_b.pair().unwrap()).unwrap();
        assert!(rq.is_zero() && rp.is_zero());

        // c-shear: u = exp(-i c p^2 / (2 hbar))
        let c = param("c");
        let shear_c = Sl2::new(RatSymbol::one(), RatSymbol::zero(), c.clone(), RatSymbol::one())
            .unwrap();
        let u = sl2_u(&shear_c).unwrap();
        let expected = &(&c * &(&p() * &p())).scale(&GaussianRational::imag_ratio(-1, 2))
            / &RatSymbol::var(Variable::Hbar);
        assert_eq!(u.phase, expected);
        let (rq, rp) = star_eigen_residuals(&u, &shear_c.pair().unwrap()).unwrap();
        assert!(rq.is_zero() && rp.is_zero());

        // rotation [[0,-1],[1,0]]: u = sqrt(2) exp(-i (p^2+q^2)/hbar)
        let rot = Sl2::from_rationals([(0, 1), (-1, 1), (1, 1), (0, 1)]).unwrap();
        let u = sl2_u(&rot).unwrap();
        let expected_phase = &(&(&p() * &p()) + &(&q() * &q()))
            .scale(&GaussianRational::imag_ratio(-1, 1))
            / &RatSymbol::var(Variable::Hbar);
        assert_eq!(u.phase, expected_phase);
        assert_eq!(*u.pref.rational(), RatSymbol::one());
        assert_eq!(*u.pref.radicand(), RatSymbol::from_int(2));
        let (rq, rp) = star_eigen_residuals(&u, &rot.pair().unwrap()).unwrap();
        assert!(rq.is_zero() && rp.is_zero());
    }

    #[test]
    fn identity_u_is_one() {
        let u = sl2_u(&Sl2::identity()).unwrap();
        assert!(u.is_one());
        let (rq, rp) = star_eigen_residuals(&u, &CanonicalPair::identity()).unwrap();
        assert!(rq.is_zero() && rp.is_zero());
    }

    #[test]
    fn trace_minus_two_rejected() {
        // [[-1, 0], [0, -1]] has trace -2
        let g = Sl2::from_rationals([(-1, 1), (0, 1), (0, 1), (-1, 1)]).unwrap();
        assert!(matches!(sl2_u(&g), Err(GenFunError::TracePlusTwoSingular)));
    }

    #[test]
    fn determinant_validated() {
        assert!(matches!(
            Sl2::from_rationals([(1, 1), (1, 1), (1, 1), (1, 1)]),
            Err(GenFunError::NotCanonical)
        ));
    }

    #[test]
    fn moebius_gradient_is_not_exact() {
        // the gamma-deformed pair falls outside the sufficient covariance
        // class: its gradient system has unequal mixed partials
        let ct = moebius_pair();
        let (gp, gq) = gradient_t(&ct).unwrap();
        assert!(matches!(
            integrate_gradient(&gp, &gq),
            Err(GenFunError::ExactnessFailure)
        ));
    }

    #[test]
    fn covariance_conditions() {
        // manifestly satisfied for linear symplectic maps
        let g = Sl2::symbolic();
        let u = sl2_u(&g).unwrap();
        assert!(covariance_condition_check(&u, &g.pair().unwrap()).unwrap());
        // trivially satisfied for the identity
        let id = CanonicalPair::identity();
        assert!(covariance_condition_check(&ExpSymbol::one(), &id).unwrap());
        // holds for the linear-potential pair as well
        let ct = linear_potential();
        let (gp, gq) = gradient_t(&ct).unwrap();
        let u = build_u(&integrate_gradient(&gp, &gq).unwrap()).unwrap();
        assert!(covariance_condition_check(&u, &ct).unwrap());
    }

    #[test]
    fn star_against_exponential_is_a_bopp_shift() {
        // q * u = (q + (i hbar/2) d_p) u and u * p = (p + (i hbar/2) d_q) u
        let phase = &(&q() * &(&p() * &p())).scale(&GaussianRational::imag_ratio(1, 1))
            / &RatSymbol::var(Variable::Hbar);
        let u = ExpSymbol::from_phase(phase);
        let ih2 = half_i_hbar();

        let lhs = star_exp_right(&q(), &u).unwrap();
        let rhs = add_same_phase(&u.scale(&q()), &u.partial(&Variable::P).scale(&ih2));
        assert_eq!(lhs, rhs);

        let lhs = star_exp_left(&u, &p()).unwrap();
        let rhs = add_same_phase(&u.scale(&p()), &u.partial(&Variable::Q).scale(&ih2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eigen_residuals_flag_wrong_u() {
        // the identity symbol does not generate the linear-potential map
        let ct = linear_potential();
        let (rq, _rp) = star_eigen_residuals(&ExpSymbol::one(), &ct).unwrap();
        assert!(!rq.is_zero());
    }

    #[test]
    fn eigen_residuals_require_bounded_degree() {
        let ct = moebius_pair();
        assert!(matches!(
            star_eigen_residuals(&ExpSymbol::one(), &ct),
            Err(GenFunError::Star(StarError::NonTerminatingSeries))
        ));
    }

    #[test]
    fn hbar_dependent_t_rejected() {
        let t = &RatSymbol::var(Variable::Hbar) * &p();
        assert!(matches!(build_u(&t), Err(GenFunError::HbarDependentT)));
        assert!(!hbar_independence_check(&t));
    }
}
