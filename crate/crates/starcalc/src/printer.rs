//! Canonical printing of symbols: plain text (round-trips through the
//! parser), LaTeX math fragments, and the JSON wire form.
//!
//! Term order is ascending in the deformation parameter `gamma`, then
//! descending lexicographic in the remaining variables, so series read
//! naturally (`p - gamma*p^2 + ...`) while plain polynomials lead with the
//! dominant monomial (`p*q - (1/2)*i*hbar`).

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::algebra::{GaussianRational, Monomial, PolySymbol, RatSymbol, Variable};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Plain,
    Latex,
    Json,
}

/// Print a rational symbol in the requested format.
pub fn print(f: &RatSymbol, format: Format) -> String {
    match format {
        Format::Plain => rat_plain(f),
        Format::Latex => rat_latex(f),
        Format::Json => crate::json::rat_to_json_string(f),
    }
}

enum Sign {
    Pos,
    Neg,
    /// mixed complex coefficients are grouped in parens and joined with `+`
    Grouped,
}

fn ordered_terms(p: &PolySymbol) -> Vec<(&Monomial, &GaussianRational)> {
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|(ma, _), (mb, _)| {
        let ga = ma.exponent(&Variable::Gamma);
        let gb = mb.exponent(&Variable::Gamma);
        ga.cmp(&gb).then_with(|| mb.cmp(ma))
    });
    terms
}

fn rational_bare(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Magnitude of a real rational as a plain factor: `2` or `(1/2)`.
fn rational_factor(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

fn monomial_factors_plain(m: &Monomial) -> Vec<String> {
    let mut factors: Vec<(&str, u32)> = m.iter().map(|(v, e)| (v.name(), *e)).collect();
    factors.sort_by(|a, b| a.0.cmp(b.0));
    factors
        .into_iter()
        .map(|(name, e)| {
            if e == 1 {
                name.to_string()
            } else {
                format!("{name}^{e}")
            }
        })
        .collect()
}

/// Render one term as (sign, body) in plain syntax.
fn term_plain(m: &Monomial, c: &GaussianRational) -> (Sign, String) {
    let vars = monomial_factors_plain(m);
    if c.is_real() {
        let r = c.re();
        let sign = if r.is_negative() { Sign::Neg } else { Sign::Pos };
        let mag = r.abs();
        let body = if vars.is_empty() {
            rational_bare(&mag)
        } else if mag.is_one() {
            vars.join("*")
        } else {
            let mut parts = vec![rational_factor(&mag)];
            parts.extend(vars);
            parts.join("*")
        };
        (sign, body)
    } else if c.is_imaginary() {
        let b = c.im();
        let sign = if b.is_negative() { Sign::Neg } else { Sign::Pos };
        let mag = b.abs();
        let mut parts = Vec::new();
        if !mag.is_one() {
            parts.push(rational_factor(&mag));
        }
        parts.push("i".to_string());
        parts.extend(vars);
        (sign, parts.join("*"))
    } else {
        // mixed complex: grouped coefficient
        let re = c.re();
        let im = c.im();
        let op = if im.is_negative() { " - " } else { " + " };
        let im_mag = im.abs();
        let im_str = if im_mag.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", rational_bare(&im_mag))
        };
        let group = format!("({}{}{})", rational_bare(re), op, im_str);
        let mut parts = vec![group];
        parts.extend(vars);
        (Sign::Grouped, parts.join("*"))
    }
}

pub fn poly_plain(p: &PolySymbol) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in ordered_terms(p).into_iter().enumerate() {
        let (sign, body) = term_plain(m, c);
        if idx == 0 {
            if let Sign::Neg = sign {
                out.push('-');
            }
        } else {
            out.push_str(match sign {
                Sign::Neg => " - ",
                _ => " + ",
            });
        }
        out.push_str(&body);
    }
    out
}

/// True when the polynomial prints as a single atom-safe factor for use as
/// a denominator without parentheses (one term, unit coefficient, one
/// variable).
fn den_is_simple(p: &PolySymbol) -> bool {
    if p.num_terms() != 1 {
        return false;
    }
    let (m, c) = p.terms().next().unwrap();
    c.is_one() && m.iter().count() == 1
}

pub fn rat_plain(f: &RatSymbol) -> String {
    match f.as_poly() {
        Some(p) => poly_plain(p),
        None => {
            let num = f.num();
            let num_str = if num.num_terms() == 1 {
                let (m, c) = num.terms().next().unwrap();
                let (sign, body) = term_plain(m, c);
                match sign {
                    Sign::Neg => format!("-{body}"),
                    _ => body,
                }
            } else {
                format!("({})", poly_plain(num))
            };
            let den = f.den();
            let den_str = if den_is_simple(den) {
                poly_plain(den)
            } else {
                format!("({})", poly_plain(den))
            };
            format!("{num_str}/{den_str}")
        }
    }
}

fn rational_latex(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn var_latex(name: &str) -> String {
    match name {
        "hbar" => "\\hbar".to_string(),
        "gamma" => "\\gamma".to_string(),
        other => other.to_string(),
    }
}

fn monomial_latex(m: &Monomial) -> Vec<String> {
    let mut factors: Vec<(&str, u32)> = m.iter().map(|(v, e)| (v.name(), *e)).collect();
    factors.sort_by(|a, b| a.0.cmp(b.0));
    factors
        .into_iter()
        .map(|(name, e)| {
            let v = var_latex(name);
            if e == 1 {
                v
            } else if e < 10 {
                format!("{v}^{e}")
            } else {
                format!("{v}^{{{e}}}")
            }
        })
        .collect()
}

fn term_latex(m: &Monomial, c: &GaussianRational) -> (Sign, String) {
    let vars = monomial_latex(m);
    if c.is_real() {
        let r = c.re();
        let sign = if r.is_negative() { Sign::Neg } else { Sign::Pos };
        let mag = r.abs();
        let body = if vars.is_empty() {
            rational_latex(&mag)
        } else if mag.is_one() {
            vars.join(" ")
        } else {
            let mut parts = vec![rational_latex(&mag)];
            parts.extend(vars);
            parts.join(" ")
        };
        (sign, body)
    } else if c.is_imaginary() {
        let b = c.im();
        let sign = if b.is_negative() { Sign::Neg } else { Sign::Pos };
        let mag = b.abs();
        let mut parts = Vec::new();
        if !mag.is_one() {
            parts.push(rational_latex(&mag));
        }
        parts.push("i".to_string());
        parts.extend(vars);
        (sign, parts.join(" "))
    } else {
        let re = c.re();
        let im = c.im();
        let op = if im.is_negative() { " - " } else { " + " };
        let im_mag = im.abs();
        let im_str = if im_mag.is_one() {
            "i".to_string()
        } else {
            format!("{} i", rational_latex(&im_mag))
        };
        let group = format!("({}{}{})", rational_latex(re), op, im_str);
        let mut parts = vec![group];
        parts.extend(vars);
        (Sign::Grouped, parts.join(" "))
    }
}

pub fn poly_latex(p: &PolySymbol) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in ordered_terms(p).into_iter().enumerate() {
        let (sign, body) = term_latex(m, c);
        if idx == 0 {
            if let Sign::Neg = sign {
                out.push('-');
            }
        } else {
            out.push_str(match sign {
                Sign::Neg => " - ",
                _ => " + ",
            });
        }
        out.push_str(&body);
    }
    out
}

pub fn rat_latex(f: &RatSymbol) -> String {
    match f.as_poly() {
        Some(p) => poly_latex(p),
        None => format!("\\frac{{{}}}{{{}}}", poly_latex(f.num()), poly_latex(f.den())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PolySymbol;

    fn p() -> PolySymbol {
        PolySymbol::var(Variable::P)
    }
    fn q() -> PolySymbol {
        PolySymbol::var(Variable::Q)
    }
    fn hbar() -> PolySymbol {
        PolySymbol::var(Variable::Hbar)
    }
    fn gamma() -> PolySymbol {
        PolySymbol::var(Variable::Gamma)
    }

    #[test]
    fn difference_of_squares_plain() {
        let f = &p().pow(2) - &q().pow(2);
        assert_eq!(poly_plain(&f), "p^2 - q^2");
    }

    #[test]
    fn canonical_star_output() {
        // p*q - (1/2)*i*hbar
        let f = &(&p() * &q()) - &hbar().scale(&GaussianRational::imag_ratio(1, 2));
        assert_eq!(poly_plain(&f), "p*q - (1/2)*i*hbar");
    }

    #[test]
    fn moebius_latex() {
        let f = RatSymbol::new(p(), &PolySymbol::one() + &(&gamma() * &p())).unwrap();
        assert_eq!(rat_latex(&f), "\\frac{p}{1 + \\gamma p}");
    }

    #[test]
    fn single_negative_fraction_coefficient() {
        let a = PolySymbol::var(Variable::param("a"));
        let f = (&a * &p().pow(3)).scale(&GaussianRational::ratio(-1, 6));
        assert_eq!(poly_plain(&f), "-(1/6)*a*p^3");
    }

    #[test]
    fn gamma_terms_print_ascending() {
        let f = &p() + &(&gamma() * &p().pow(2)).scale(&GaussianRational::from_int(-1));
        assert_eq!(poly_plain(&f), "p - gamma*p^2");
    }

    #[test]
    fn mixed_complex_coefficient_groups() {
        let c = GaussianRational::new(
            BigRational::from_integer(1.into()),
            BigRational::from_integer((-2).into()),
        );
        let f = p().scale(&c);
        assert_eq!(poly_plain(&f), "(1 - 2*i)*p");
    }

    #[test]
    fn zero_prints_as_zero() {
        assert_eq!(poly_plain(&PolySymbol::zero()), "0");
        assert_eq!(rat_plain(&RatSymbol::zero()), "0");
    }
}
