//! Exponential symbols `prefactor * exp(phase)` and their structured
//! prefactors.
//!
//! A prefactor is a rational-function factor times a single square root,
//! a power of `e^{i pi/4}` and a half-integer power of `2 pi hbar`. After
//! normalization the phase power is 0 or 1 (even eighths are absorbed
//! into the Gaussian-rational coefficient as powers of `i`), square
//! rational content is pulled out of the radicand, and fourth-root units
//! are pulled out through a fixed branch table
//! `sqrt(-1) = i`, `sqrt(i) = e^{i pi/4}`, `sqrt(-i) = e^{-i pi/4}`.
//! That table is the module's Fresnel branch convention.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{AlgebraError, GaussianRational, RatSymbol, Unit, Variable};

/// Split a positive rational into `(s, r)` with `value = s^2 * r` and `r`
/// square-free in its numerator and denominator.
fn extract_square(value: &BigRational) -> (BigRational, BigRational) {
    fn split(n: &BigInt) -> (BigInt, BigInt) {
        let mag = n.magnitude().clone();
        let mut rem = mag.clone();
        let mut root = BigUint::one();
        let mut d = 2u64;
        while &BigUint::from(d) * &BigUint::from(d) <= rem && d < 100_000 {
            let big_d = BigUint::from(d);
            let sq = &big_d * &big_d;
            while (&rem % &sq).is_zero() {
                rem /= &sq;
                root *= &big_d;
            }
            d += 1;
        }
        // perfect-square cofactor
        let s = rem.sqrt();
        if &s * &s == rem {
            root *= &s;
            rem = BigUint::one();
        }
        (BigInt::from(root), BigInt::from(rem))
    }
    debug_assert!(value.is_positive());
    let (sn, rn) = split(value.numer());
    let (sd, rd) = split(value.denom());
    (BigRational::new(sn, sd), BigRational::new(rn, rd))
}

/// `rational * sqrt(radicand) * e^{i pi/4 phase_eighths} * (2 pi hbar)^{two_pi_hbar_halves/2}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Prefactor {
    rational: RatSymbol,
    radicand: RatSymbol,
    phase_eighths: u8,
    two_pi_hbar_halves: i32,
}

impl Prefactor {
    pub fn one() -> Self {
        Prefactor {
            rational: RatSymbol::one(),
            radicand: RatSymbol::one(),
            phase_eighths: 0,
            two_pi_hbar_halves: 0,
        }
    }

    pub fn from_rational(rational: RatSymbol) -> Self {
        Prefactor { rational, ..Prefactor::one() }.normalized()
    }

    pub fn rational(&self) -> &RatSymbol {
        &self.rational
    }

    pub fn radicand(&self) -> &RatSymbol {
        &self.radicand
    }

    pub fn phase_eighths(&self) -> u8 {
        self.phase_eighths
    }

    pub fn two_pi_hbar_halves(&self) -> i32 {
        self.two_pi_hbar_halves
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }

    pub fn is_one(&self) -> bool {
        *self == Prefactor::one()
    }

    pub fn mul_rational(&self, r: &RatSymbol) -> Prefactor {
        Prefactor { rational: &self.rational * r, ..self.clone() }.normalized()
    }

    /// Swap out the rational part, keeping radical/phase bookkeeping.
    pub(crate) fn replace_rational(&self, rational: RatSymbol) -> Prefactor {
        Prefactor { rational, ..self.clone() }.normalized()
    }

    /// Multiply by `sqrt(radicand)`.
    pub fn mul_sqrt(&self, radicand: &RatSymbol) -> Prefactor {
        Prefactor { radicand: &self.radicand * radicand, ..self.clone() }.normalized()
    }

    pub fn mul_phase_eighths(&self, k: u8) -> Prefactor {
        Prefactor {
            phase_eighths: (self.phase_eighths + k) % 8,
            ..self.clone()
        }
        .normalized()
    }

    pub fn mul_two_pi_hbar_halves(&self, m: i32) -> Prefactor {
        Prefactor { two_pi_hbar_halves: self.two_pi_hbar_halves + m, ..self.clone() }
    }

    pub fn mul(&self, rhs: &Prefactor) -> Prefactor {
        Prefactor {
            rational: &self.rational * &rhs.rational,
            radicand: &self.radicand * &rhs.radicand,
            phase_eighths: (self.phase_eighths + rhs.phase_eighths) % 8,
            two_pi_hbar_halves: self.two_pi_hbar_halves + rhs.two_pi_hbar_halves,
        }
        .normalized()
    }

    fn normalized(mut self) -> Prefactor {
        if self.rational.is_zero() {
            return Prefactor {
                rational: RatSymbol::zero(),
                radicand: RatSymbol::one(),
                phase_eighths: 0,
                two_pi_hbar_halves: 0,
            };
        }
        // pull a fourth-root unit out of the radicand's leading coefficient
        if !self.radicand.is_one() && !self.radicand.is_zero() {
            let lc = self
                .radicand
                .num()
                .leading_term()
                .map(|(_, c)| c.clone())
                .expect("nonzero radicand");
            let unit = if lc.is_real() {
                if lc.re().is_negative() {
                    Some(Unit::MinusOne)
                } else {
                    None
                }
            } else if lc.is_imaginary() {
                if lc.im().is_negative() {
                    Some(Unit::MinusI)
                } else {
                    Some(Unit::I)
                }
            } else {
                None
            };
            if let Some(u) = unit {
                let unscale = match u {
                    Unit::One => GaussianRational::one(),
                    Unit::MinusOne => GaussianRational::from_int(-1),
                    Unit::I => GaussianRational::i(),
                    Unit::MinusI => -GaussianRational::i(),
                };
                self.radicand = self.radicand.scale(&unscale.inv().unwrap());
                match u {
                    Unit::One => {}
                    Unit::MinusOne => {
                        self.rational = self.rational.scale(&GaussianRational::i());
                    }
                    Unit::I => {
                        self.phase_eighths = (self.phase_eighths + 1) % 8;
                    }
                    Unit::MinusI => {
                        self.phase_eighths = (self.phase_eighths + 7) % 8;
                    }
                }
            }
            // normalize the radicand's rational content to a square-free
            // integer: sqrt(n/d * R) = (1/d) sqrt(n d R), then pull out the
            // square part of n d
            let content_num = self.radicand.num().rational_content();
            let content_den = self.radicand.den().rational_content();
            let content = content_num / content_den;
            if content.is_positive() {
                let d = content.denom().clone();
                if !d.is_one() {
                    let d_rat = BigRational::from_integer(d);
                    self.radicand = self
                        .radicand
                        .scale(&GaussianRational::from_rational(&d_rat * &d_rat));
                    self.rational = self
                        .rational
                        .scale(&GaussianRational::from_rational(BigRational::one() / d_rat));
                }
                let int_content = self.radicand.num().rational_content()
                    / self.radicand.den().rational_content();
                let (s, _r) = extract_square(&int_content);
                if !s.is_one() {
                    let s_sq = &s * &s;
                    self.radicand = self
                        .radicand
                        .scale(&GaussianRational::from_rational(BigRational::one() / s_sq));
                    self.rational = self
                        .rational
                        .scale(&GaussianRational::from_rational(s));
                }
            }
        }
        // absorb even phase eighths as powers of i
        let quarters = self.phase_eighths / 2;
        if quarters > 0 {
            self.rational = self.rational.scale(&GaussianRational::i().pow(quarters as u32));
            self.phase_eighths %= 2;
        }
        self
    }
}

impl fmt::Display for Prefactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        // recombine a constant unit of the rational part with the stored
        // eighth-phase for readable output
        let mut eighths = self.phase_eighths as u32;
        let mut magnitude: Option<RatSymbol> = None;
        if let Some(c) = self.rational.as_constant() {
            use num_traits::Signed;
            let (unit_eighths, mag) = if c.is_real() {
                if c.re().is_negative() {
                    (4, RatSymbol::constant(-&c))
                } else {
                    (0, RatSymbol::constant(c.clone()))
                }
            } else if c.is_imaginary() {
                if c.im().is_negative() {
                    (6, RatSymbol::constant(&c * &GaussianRational::i()))
                } else {
                    (2, RatSymbol::constant(&(&c * &GaussianRational::i()) * &GaussianRational::from_int(-1)))
                }
            } else {
                (0, self.rational.clone())
            };
            eighths = (eighths + unit_eighths) % 8;
            magnitude = Some(mag);
        }
        let rational = magnitude.unwrap_or_else(|| self.rational.clone());

        let mut parts: Vec<String> = Vec::new();
        let mut lead_minus = false;
        match eighths {
            0 => {}
            1 => parts.push("e^(i*pi/4)".to_string()),
            2 => parts.push("i".to_string()),
            3 => parts.push("e^(3*i*pi/4)".to_string()),
            4 => lead_minus = true,
            5 => parts.push("e^(-3*i*pi/4)".to_string()),
            6 => parts.push("-i".to_string()),
            _ => parts.push("e^(-i*pi/4)".to_string()),
        }
        if !rational.is_one() {
            parts.insert(0, crate::printer::rat_plain(&rational));
        }
        if !self.radicand.is_one() {
            parts.push(format!("sqrt({})", crate::printer::rat_plain(&self.radicand)));
        }
        if self.two_pi_hbar_halves != 0 {
            let m = self.two_pi_hbar_halves;
            if m % 2 == 0 {
                parts.push(format!("(2*pi*hbar)^{}", m / 2));
            } else {
                parts.push(format!("(2*pi*hbar)^({m}/2)"));
            }
        }
        if parts.is_empty() {
            parts.push("1".to_string());
        }
        let body = parts.join("*");
        if lead_minus {
            write!(f, "-{body}")
        } else {
            f.write_str(&body)
        }
    }
}

/// `prefactor * exp(phase)` with an exact rational phase.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpSymbol {
    pub pref: Prefactor,
    pub phase: RatSymbol,
}

impl ExpSymbol {
    pub fn one() -> Self {
        ExpSymbol { pref: Prefactor::one(), phase: RatSymbol::zero() }
    }

    pub fn from_phase(phase: RatSymbol) -> Self {
        ExpSymbol { pref: Prefactor::one(), phase }
    }

    pub fn is_zero(&self) -> bool {
        self.pref.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.pref.is_one() && self.phase.is_zero()
    }

    pub fn mul(&self, rhs: &ExpSymbol) -> ExpSymbol {
        ExpSymbol { pref: self.pref.mul(&rhs.pref), phase: &self.phase + &rhs.phase }
    }

    pub fn scale(&self, r: &RatSymbol) -> ExpSymbol {
        ExpSymbol { pref: self.pref.mul_rational(r), phase: self.phase.clone() }
    }

    pub fn conj_phase(&self) -> RatSymbol {
        -&self.phase
    }

    /// Partial derivative: `d(r e^phi) = (dr + r dphi) e^phi`. The radical
    /// part must not depend on the differentiation variable.
    pub fn partial(&self, v: &Variable) -> ExpSymbol {
        assert!(
            !self.pref.radicand.contains_var(v),
            "radicand depends on differentiation variable"
        );
        assert!(*v != Variable::Hbar, "hbar-derivatives of exponentials are not closed here");
        let r = &self.pref.rational;
        let new_rational = &r.partial(v) + &(r * &self.phase.partial(v));
        ExpSymbol {
            pref: Prefactor { rational: new_rational, ..self.pref.clone() }.normalized(),
            phase: self.phase.clone(),
        }
    }

    /// Substitute into both the phase and the prefactor.
    pub fn substitute(
        &self,
        map: &BTreeMap<Variable, RatSymbol>,
    ) -> Result<ExpSymbol, AlgebraError> {
        Ok(ExpSymbol {
            pref: Prefactor {
                rational: self.pref.rational.substitute(map)?,
                radicand: self.pref.radicand.substitute(map)?,
                ..self.pref.clone()
            }
            .normalized(),
            phase: self.phase.substitute(map)?,
        })
    }
}

impl fmt::Display for ExpSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase.is_zero() {
            return write!(f, "{}", self.pref);
        }
        if self.pref.is_one() {
            return write!(f, "exp({})", crate::printer::rat_plain(&self.phase));
        }
        write!(f, "{}*exp({})", self.pref, crate::printer::rat_plain(&self.phase))
    }
}
