//! Integral kernels of the transformation operator in the four Dirac
//! representations, computed from the phase-space symbol `u(p, q)`.
//!
//! Each transform is a chain of one-variable integrals over an exponential
//! integrand. A step either completes the square (exponent quadratic in
//! the integration variable) or collapses through a Dirac delta (exponent
//! exactly linear). The Fresnel branch is fixed so that the linear
//! symplectic position kernel carries the prefactor
//! `e^{-i pi/4}/sqrt(2 pi hbar c)`.
//!
//! Kernel phases follow this composition-consistent convention throughout;
//! the classical generating function is extracted from the conjugate
//! phase, `F = -hbar/i * phase`, and satisfies the textbook relations
//! (`p = dF1/dq`, `P = -dF1/dQ`; `q = -dF3/dp`, `P = -dF3/dQ`).

use std::collections::BTreeMap;

use crate::algebra::{GaussianRational, RatSymbol, Variable};

use super::expsym::{ExpSymbol, Prefactor};
use super::{CanonicalPair, GenFunError};

/// Kernel representations: `F(y, x)`, `K(y, p_x)`, `H(p_y, p_x)`,
/// `L(p_y, x)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KernelKind {
    Position,
    Mixed,
    Momentum,
    Mixed2,
}

impl KernelKind {
    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Position => "position",
            KernelKind::Mixed => "mixed",
            KernelKind::Momentum => "momentum",
            KernelKind::Mixed2 => "mixed2",
        }
    }
}

pub fn x_var() -> Variable {
    Variable::param("x")
}
pub fn y_var() -> Variable {
    Variable::param("y")
}
pub fn px_var() -> Variable {
    Variable::param("px")
}
pub fn py_var() -> Variable {
    Variable::param("py")
}

/// `prefactor * [delta(arg)] * exp(phase)` in the kernel variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Kernel {
    pub kind: KernelKind,
    pub pref: Prefactor,
    pub delta: Option<RatSymbol>,
    pub phase: RatSymbol,
}

struct Integrand {
    pref: Prefactor,
    phase: RatSymbol,
    delta: Option<RatSymbol>,
}

impl Integrand {
    fn from_exp(u: &ExpSymbol) -> Self {
        Integrand { pref: u.pref.clone(), phase: u.phase.clone(), delta: None }
    }

    /// Integrate out `v`, either by delta collapse or by completing the
    /// square.
    fn integrate(&mut self, v: &Variable) -> Result<(), GenFunError> {
        if self.pref.radicand().contains_var(v) {
            return Err(GenFunError::PrefactorDependsOnVariable);
        }
        if let Some(arg) = self.delta.clone() {
            if arg.contains_var(v) {
                return self.collapse_delta(v, &arg);
            }
        }
        if self.pref.rational().contains_var(v) {
            return Err(GenFunError::PrefactorDependsOnVariable);
        }
        if self.phase.den().contains_var(v) {
            return Err(GenFunError::UnsupportedExponentDegree { degree: u32::MAX });
        }
        let coeffs = self.phase.num().univariate_in(v);
        let degree = coeffs.keys().max().copied().unwrap_or(0);
        if degree > 2 {
            return Err(GenFunError::UnsupportedExponentDegree { degree });
        }
        let den = RatSymbol::from(self.phase.den());
        let part = |k: u32| -> RatSymbol {
            coeffs
                .get(&k)
                .map(|c| &RatSymbol::from(c) / &den)
                .unwrap_or_else(RatSymbol::zero)
        };
        let a = part(2);
        let b = part(1);
        let c = part(0);
        if !a.is_zero() {
            // Fresnel integral: exp(A v^2 + B v) integrates to
            // sqrt(pi hbar / alpha) e^{-i pi/4} exp(-B^2/(4A)),
            // alpha = i hbar A
            let i_hbar = RatSymbol::var(Variable::Hbar).scale(&GaussianRational::i());
            let alpha = &i_hbar * &a;
            let two_alpha = alpha.scale(&GaussianRational::from_int(2));
            self.pref = self
                .pref
                .mul_two_pi_hbar_halves(1)
                .mul_sqrt(&two_alpha.inv()?)
                .mul_phase_eighths(7);
            let four_a = a.scale(&GaussianRational::from_int(4));
            self.phase = &c - &(&(&b * &b) / &four_a);
            Ok(())
        } else if !b.is_zero() {
            // exp(B v) with B = (i/hbar) t integrates to 2 pi hbar delta(t)
            if self.delta.is_some() {
                return Err(GenFunError::DeltaCollision);
            }
            let t = (&b * &RatSymbol::var(Variable::Hbar)).scale(&-GaussianRational::i());
            self.delta = Some(t);
            self.pref = self.pref.mul_two_pi_hbar_halves(2);
            self.phase = c;
            Ok(())
        } else {
            Err(GenFunError::UnsupportedExponentDegree { degree: 0 })
        }
    }

    /// Consume a pending `delta(A v + B)`: substitute `v = -B/A` and divide
    /// by `|A|`.
    fn collapse_delta(&mut self, v: &Variable, arg: &RatSymbol) -> Result<(), GenFunError> {
        if arg.den().contains_var(v) {
            return Err(GenFunError::UnsupportedExponentDegree { degree: u32::MAX });
        }
        let coeffs = arg.num().univariate_in(v);
        let degree = coeffs.keys().max().copied().unwrap_or(0);
        if degree != 1 {
            return Err(GenFunError::UnsupportedExponentDegree { degree });
        }
        let den = RatSymbol::from(arg.den());
        let a = &RatSymbol::from(coeffs.get(&1).unwrap()) / &den;
        let b = coeffs
            .get(&0)
            .map(|c| &RatSymbol::from(c) / &den)
            .unwrap_or_else(RatSymbol::zero);
        let v0 = -&(&b / &a);
        let mut map = BTreeMap::new();
        map.insert(v.clone(), v0);
        self.phase = self.phase.substitute(&map)?;
        let rational = self.pref.rational().substitute(&map)?;
        // |A| for exact real constants; symbolic slopes divide as-is
        let scale = match a.as_constant() {
            Some(c) if c.is_real() => {
                use num_traits::Signed;
                if c.re().is_negative() {
                    a.scale(&GaussianRational::from_int(-1))
                } else {
                    a
                }
            }
            _ => a,
        };
        self.pref = self.pref.replace_rational(&rational / &scale);
        self.delta = None;
        Ok(())
    }
}

fn i_over_hbar() -> RatSymbol {
    RatSymbol::var(Variable::Hbar)
        .inv()
        .expect("hbar is nonzero")
        .scale(&GaussianRational::i())
}

/// Compute the requested kernel of the symbol `u`.
///
/// * position: `e^{iF(y,x)} = int dp/(2 pi hbar) e^{ip(y-x)/hbar} u(p, (x+y)/2)`
/// * mixed: the position kernel Fourier-transformed in `x` against `e^{ix p_x/hbar}`
/// * momentum: `e^{iH(p_y,p_x)} = int dq e^{-iq(p_x-p_y)/hbar} u((p_y+p_x)/2, q)`
/// * mixed2: the momentum kernel Fourier-transformed in `p_x` against `e^{-ix p_x/hbar}`
pub fn kernel_transform(u: &ExpSymbol, kind: KernelKind) -> Result<Kernel, GenFunError> {
    let p = RatSymbol::var(Variable::P);
    let q = RatSymbol::var(Variable::Q);
    let x = RatSymbol::from(crate::algebra::PolySymbol::var(x_var()));
    let y = RatSymbol::from(crate::algebra::PolySymbol::var(y_var()));
    let px = RatSymbol::from(crate::algebra::PolySymbol::var(px_var()));
    let py = RatSymbol::from(crate::algebra::PolySymbol::var(py_var()));
    let half = GaussianRational::ratio(1, 2);

    let mut ig;
    match kind {
        KernelKind::Position | KernelKind::Mixed => {
            // u(p, (x+y)/2) e^{i p (y - x)/hbar} / (2 pi hbar)
            let mut map = BTreeMap::new();
            map.insert(Variable::Q, (&x + &y).scale(&half));
            let u_sub = u.substitute(&map)?;
            ig = Integrand::from_exp(&u_sub);
            ig.phase = &ig.phase + &(&i_over_hbar() * &(&p * &(&y - &x)));
            ig.pref = ig.pref.mul_two_pi_hbar_halves(-2);
            if kind == KernelKind::Mixed {
                ig.phase = &ig.phase + &(&i_over_hbar() * &(&x * &px));
                ig.integrate(&x_var())?;
            }
            ig.integrate(&Variable::P)?;
        }
        KernelKind::Momentum | KernelKind::Mixed2 => {
            // u((p_y + p_x)/2, q) e^{-i q (p_x - p_y)/hbar}
            let mut map = BTreeMap::new();
            map.insert(Variable::P, (&py + &px).scale(&half));
            let u_sub = u.substitute(&map)?;
            ig = Integrand::from_exp(&u_sub);
            ig.phase = &ig.phase - &(&i_over_hbar() * &(&q * &(&px - &py)));
            if kind == KernelKind::Mixed2 {
                ig.phase = &ig.phase - &(&i_over_hbar() * &(&x * &px));
                ig.pref = ig.pref.mul_two_pi_hbar_halves(-2);
                ig.integrate(&Variable::Q)?;
                ig.integrate(&px_var())?;
            } else {
                ig.integrate(&Variable::Q)?;
            }
        }
    }
    Ok(Kernel { kind, pref: ig.pref, delta: ig.delta, phase: ig.phase })
}

/// Check the classical generating-function relations against the map.
///
/// The generating function is `F = -hbar/i * phase` (the conjugate-phase
/// extraction documented at module level). For a position kernel the
/// slots are `y -> Q`, `x -> q` and the relations `p = dF/dq`,
/// `P = -dF/dQ`; for a mixed kernel the slots are `y -> Q`, `p_x -> p`
/// and the relations `q = -dF/dp`, `P = -dF/dQ`. Delta kernels carry no
/// generating function and report `false`.
pub fn classical_genfun_check(kernel: &Kernel, ct: &CanonicalPair) -> Result<bool, GenFunError> {
    if kernel.delta.is_some() {
        return Ok(false);
    }
    // phase = (i/hbar) F_gen requires the scaled phase to be hbar-free
    let gen = (&kernel.phase * &RatSymbol::var(Variable::Hbar))
        .scale(&-GaussianRational::i());
    if gen.contains_var(&Variable::Hbar) {
        return Err(GenFunError::HbarResidue);
    }
    let f_gen = -&gen;
    let p = RatSymbol::var(Variable::P);
    let q = RatSymbol::var(Variable::Q);
    match kernel.kind {
        KernelKind::Position => {
            let mut map = BTreeMap::new();
            map.insert(y_var(), ct.q_out().clone());
            map.insert(x_var(), q.clone());
            let df_dx = f_gen.partial(&x_var()).substitute(&map)?;
            let df_dy = f_gen.partial(&y_var()).substitute(&map)?;
            Ok(df_dx == p && -&df_dy == *ct.p_out())
        }
        KernelKind::Mixed => {
            let mut map = BTreeMap::new();
            map.insert(y_var(), ct.q_out().clone());
            map.insert(px_var(), p.clone());
            let df_dpx = f_gen.partial(&px_var()).substitute(&map)?;
            let df_dy = f_gen.partial(&y_var()).substitute(&map)?;
            Ok(-&df_dpx == q && -&df_dy == *ct.p_out())
        }
        _ => Err(GenFunError::UnsupportedKernelKind),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PolySymbol;
    use crate::genfun::{build_u, gradient_t, integrate_gradient, sl2_u, Sl2};

    fn rat_var(v: Variable) -> RatSymbol {
        RatSymbol::from(PolySymbol::var(v))
    }
    fn param(name: &str) -> RatSymbol {
        rat_var(Variable::param(name))
    }
    fn i_over_h() -> RatSymbol {
        RatSymbol::var(Variable::Hbar).inv().unwrap().scale(&GaussianRational::i())
    }

    #[test]
    fn identity_position_kernel_collapses_to_delta() {
        let k = kernel_transform(&super::super::ExpSymbol::one(), KernelKind::Position).unwrap();
        assert!(k.pref.is_one());
        assert!(k.phase.is_zero());
        let expected = &rat_var(y_var()) - &rat_var(x_var());
        assert_eq!(k.delta, Some(expected));
    }

    #[test]
    fn sl2_position_kernel() {
        // prefactor e^{-i pi/4}/sqrt(2 pi hbar c), exponent
        // i (a y^2 + d x^2 - 2 x y)/(2 hbar c)
        let g = Sl2::symbolic();
        let u = sl2_u(&g).unwrap();
        let k = kernel_transform(&u, KernelKind::Position).unwrap();
        assert!(k.delta.is_none());

        let expected_pref = Prefactor::one()
            .mul_sqrt(&g.c.inv().unwrap())
            .mul_phase_eighths(7)
            .mul_two_pi_hbar_halves(-1);
        assert_eq!(k.pref, expected_pref);

        let x = rat_var(x_var());
        let y = rat_var(y_var());
        let two_c = g.c.scale(&GaussianRational::from_int(2));
        let quad = &(&(&g.a * &(&y * &y)) + &(&g.d * &(&x * &x)))
            - &(&x * &y).scale(&GaussianRational::from_int(2));
        let expected_phase = &(&i_over_h() * &quad) / &two_c;
        assert_eq!(k.phase, expected_phase);
    }

    #[test]
    fn sl2_position_kernel_satisfies_f1_relations() {
        let g = Sl2::symbolic();
        let u = sl2_u(&g).unwrap();
        let k = kernel_transform(&u, KernelKind::Position).unwrap();
        assert!(classical_genfun_check(&k, &g.pair().unwrap()).unwrap());
    }

    #[test]
    fn linear_potential_mixed_kernel() {
        // K(y, p_x) phase: (i/hbar)(y p_x - a p_x^3 / 3)
        let ct = super::super::CanonicalPair::linear_potential(&param("a"));
        let (gp, gq) = gradient_t(&ct).unwrap();
        let u = build_u(&integrate_gradient(&gp, &gq).unwrap()).unwrap();
        let k = kernel_transform(&u, KernelKind::Mixed).unwrap();
        assert!(k.delta.is_none());
        assert!(k.pref.is_one());
        let px = rat_var(px_var());
        let y = rat_var(y_var());
        let cubic = (&param("a") * &(&(&px * &px) * &px)).scale(&GaussianRational::ratio(1, 3));
        let expected_phase = &i_over_h() * &(&(&y * &px) - &cubic);
        assert_eq!(k.phase, expected_phase);
        // F3 relations hold for the extracted generating function
        assert!(classical_genfun_check(&k, &ct).unwrap());
    }

    #[test]
    fn linear_potential_position_kernel_is_cubic() {
        let ct = super::super::CanonicalPair::linear_potential(&param("a"));
        let (gp, gq) = gradient_t(&ct).unwrap();
        let u = build_u(&integrate_gradient(&gp, &gq).unwrap()).unwrap();
        assert!(matches!(
            kernel_transform(&u, KernelKind::Position),
            Err(GenFunError::UnsupportedExponentDegree { degree: 3 })
        ));
    }

    #[test]
    fn momentum_kernel_of_linear_potential_is_delta() {
        let ct = super::super::CanonicalPair::linear_potential(&param("a"));
        let (gp, gq) = gradient_t(&ct).unwrap();
        let u = build_u(&integrate_gradient(&gp, &gq).unwrap()).unwrap();
        let k = kernel_transform(&u, KernelKind::Momentum).unwrap();
        // 2 pi hbar delta(p_y - p_x) times the symbol at the midpoint
        assert_eq!(k.pref.two_pi_hbar_halves(), 2);
        assert_eq!(k.delta, Some(&rat_var(py_var()) - &rat_var(px_var())));
    }

    #[test]
    fn shear_position_kernel_is_diagonal() {
        // the map (p + b q, q) is generated by a function of q alone, so
        // its position kernel is delta(y - x) times that function at the
        // midpoint: delta(y - x) exp(i b ((x+y)/2)^2/(2 hbar)), which on
        // the delta's support is exp(i b y^2/(2 hbar)) delta(y - x)
        let b = param("b");
        let g = Sl2::new(RatSymbol::one(), b.clone(), RatSymbol::zero(), RatSymbol::one())
            .unwrap();
        let u = crate::genfun::sl2_u(&g).unwrap();
        let k = kernel_transform(&u, KernelKind::Position).unwrap();
        assert!(k.pref.is_one());
        assert_eq!(k.delta, Some(&rat_var(y_var()) - &rat_var(x_var())));
        let mid = (&rat_var(x_var()) + &rat_var(y_var())).scale(&GaussianRational::ratio(1, 2));
        let expected = (&(&b * &(&mid * &mid))
            / &RatSymbol::var(Variable::Hbar).scale(&GaussianRational::from_int(2)))
            .scale(&GaussianRational::i());
        assert_eq!(k.phase, expected);
    }

    #[test]
    fn shear_momentum_kernel_matches_fresnel_oracle() {
        // u = exp(i b q^2/(2 hbar)); the q-integral against
        // e^{-i q (p_x - p_y)/hbar} is the standard Fresnel integral
        // sqrt(2 pi hbar / b) e^{i pi/4} exp(-i (p_x - p_y)^2/(2 b hbar))
        let b = param("b");
        let g = Sl2::new(RatSymbol::one(), b.clone(), RatSymbol::zero(), RatSymbol::one())
            .unwrap();
        let u = crate::genfun::sl2_u(&g).unwrap();
        let k = kernel_transform(&u, KernelKind::Momentum).unwrap();
        assert!(k.delta.is_none());
        let expected_pref = Prefactor::one()
            .mul_sqrt(&b.inv().unwrap())
            .mul_phase_eighths(1)
            .mul_two_pi_hbar_halves(1);
        assert_eq!(k.pref, expected_pref);
        let diff = &rat_var(px_var()) - &rat_var(py_var());
        let expected_phase = (&(&diff * &diff)
            / &(&RatSymbol::var(Variable::Hbar) * &b.scale(&GaussianRational::from_int(2))))
            .scale(&-GaussianRational::i());
        assert_eq!(k.phase, expected_phase);
    }

    #[test]
    fn identity_second_mixed_kernel_is_a_plane_wave() {
        let k = kernel_transform(&super::super::ExpSymbol::one(), KernelKind::Mixed2).unwrap();
        assert!(k.delta.is_none());
        assert!(k.pref.is_one());
        let expected = (&(&rat_var(x_var()) * &rat_var(py_var()))
            / &RatSymbol::var(Variable::Hbar))
            .scale(&-GaussianRational::i());
        assert_eq!(k.phase, expected);
    }

    #[test]
    fn sl2_momentum_and_second_mixed_kernels_compute() {
        // a generic rational instance with b != 0 so the q-integral is
        // Gaussian
        let g = Sl2::from_rationals([(2, 1), (1, 1), (1, 1), (1, 1)]).unwrap();
        let u = sl2_u(&g).unwrap();
        let h = kernel_transform(&u, KernelKind::Momentum).unwrap();
        assert!(h.delta.is_none());
        let l = kernel_transform(&u, KernelKind::Mixed2).unwrap();
        assert!(l.delta.is_none());
    }

    #[test]
    fn deliberately_wrong_generating_function_fails() {
        // F1 = Q q against the identity map violates p = dF/dq
        let phase = &i_over_h() * &(&rat_var(y_var()) * &rat_var(x_var()));
        let k = Kernel {
            kind: KernelKind::Position,
            pref: Prefactor::one(),
            delta: None,
            phase,
        };
        let id = super::super::CanonicalPair::identity();
        assert!(!classical_genfun_check(&k, &id).unwrap());
    }

    #[test]
    fn hbar_residue_detected() {
        // a phase without the 1/hbar structure leaves hbar in the
        // extracted generating function
        let phase = &rat_var(y_var()) * &rat_var(x_var());
        let k = Kernel {
            kind: KernelKind::Position,
            pref: Prefactor::one(),
            delta: None,
            phase,
        };
        let id = super::super::CanonicalPair::identity();
        assert!(matches!(
            classical_genfun_check(&k, &id),
            Err(GenFunError::HbarResidue)
        ));
    }

    #[test]
    fn delta_kernel_has_no_generating_function() {
        let k = kernel_transform(&super::super::ExpSymbol::one(), KernelKind::Position).unwrap();
        let id = super::super::CanonicalPair::identity();
        assert!(!classical_genfun_check(&k, &id).unwrap());
    }
}
