//! Parser for human-written symbol expressions.
//!
//! Grammar (see `docs/grammar.md` for the EBNF):
//!
//! ```text
//! expr   := term  (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | identifier | "(" expr ")"
//! ```
//!
//! `^` binds tighter than unary minus, which binds tighter than `*`/`/`;
//! `-` and `/` associate left. Exponents are non-negative integer
//! literals; decimal literals and implicit multiplication are rejected.
//! `hbar` and `gamma` are reserved names; `i` is the imaginary unit.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{AlgebraError, GaussianRational, PolySymbol, RatSymbol, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: {message}")]
    Syntax { offset: usize, line: usize, col: usize, message: String },
    #[error("{line}:{col}: unknown symbol `{name}`")]
    UnknownSymbol { offset: usize, line: usize, col: usize, name: String },
    #[error("{line}:{col}: negative exponent")]
    NegativeExponent { offset: usize, line: usize, col: usize },
    #[error("{line}:{col}: division by zero")]
    DivisionByZero { offset: usize, line: usize, col: usize },
    #[error("parameter `{0}` collides with a reserved name")]
    ReservedParameter(String),
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownSymbol { offset, .. }
            | ParseError::NegativeExponent { offset, .. }
            | ParseError::DivisionByZero { offset, .. } => Some(*offset),
            ParseError::ReservedParameter(_) => None,
        }
    }
}

const RESERVED: [&str; 5] = ["p", "q", "hbar", "gamma", "i"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    offset: usize,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for (i, ch) in src.char_indices() {
        if i >= offset {
            break;
        }
        if ch == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

fn syntax_error(src: &str, offset: usize, message: impl Into<String>) -> ParseError {
    let (line, col) = line_col(src, offset);
    ParseError::Syntax { offset, line, col, message: message.into() }
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn tokens(mut self, src: &str) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let offset = self.pos;
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.pos += 1;
                }
                b'+' => {
                    out.push(Spanned { tok: Tok::Plus, offset });
                    self.pos += 1;
                }
                b'-' => {
                    out.push(Spanned { tok: Tok::Minus, offset });
                    self.pos += 1;
                }
                b'*' => {
                    out.push(Spanned { tok: Tok::Star, offset });
                    self.pos += 1;
                }
                b'/' => {
                    out.push(Spanned { tok: Tok::Slash, offset });
                    self.pos += 1;
                }
                b'^' => {
                    out.push(Spanned { tok: Tok::Caret, offset });
                    self.pos += 1;
                }
                b'(' => {
                    out.push(Spanned { tok: Tok::LParen, offset });
                    self.pos += 1;
                }
                b')' => {
                    out.push(Spanned { tok: Tok::RParen, offset });
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    let start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if self.pos < self.src.len() && self.src[self.pos] == b'.' {
                        return Err(syntax_error(src, self.pos, "decimal literals are not supported"));
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    out.push(Spanned { tok: Tok::Int(text.parse().unwrap()), offset: start });
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    out.push(Spanned { tok: Tok::Ident(text.to_string()), offset: start });
                }
                _ => {
                    return Err(syntax_error(src, offset, format!("unexpected byte 0x{c:02x}")));
                }
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Spanned>,
    pos: usize,
    params: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn end_offset(&self) -> usize {
        self.src.len()
    }

    fn lower_div(&self, lhs: RatSymbol, rhs: RatSymbol, offset: usize) -> Result<RatSymbol, ParseError> {
        if rhs.is_zero() {
            let (line, col) = line_col(self.src, offset);
            return Err(ParseError::DivisionByZero { offset, line, col });
        }
        Ok(&lhs / &rhs)
    }

    fn expr(&mut self) -> Result<RatSymbol, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Plus) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = &acc + &rhs;
                }
                Some(Tok::Minus) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = &acc - &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatSymbol, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().map(|t| (t.tok.clone(), t.offset)) {
                Some((Tok::Star, _)) => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                Some((Tok::Slash, offset)) => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = self.lower_div(acc, rhs, offset)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatSymbol, ParseError> {
        if let Some(Tok::Minus) = self.peek().map(|t| t.tok.clone()) {
            self.next();
            let inner = self.unary()?;
            return Ok(-&inner);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatSymbol, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek().map(|t| t.tok.clone()) {
            self.next();
            match self.next() {
                Some(Spanned { tok: Tok::Int(n), .. }) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| self.err_at_prev("exponent too large"))?;
                    return Ok(base.pow(e));
                }
                Some(Spanned { tok: Tok::Minus, offset }) => {
                    let (line, col) = line_col(self.src, offset);
                    return Err(ParseError::NegativeExponent { offset, line, col });
                }
                Some(Spanned { offset, .. }) => {
                    return Err(syntax_error(self.src, offset, "expected integer exponent"));
                }
                None => {
                    return Err(syntax_error(self.src, self.end_offset(), "expected integer exponent"));
                }
            }
        }
        Ok(base)
    }

    fn err_at_prev(&self, message: &str) -> ParseError {
        let offset = self
            .toks
            .get(self.pos.saturating_sub(1))
            .map(|t| t.offset)
            .unwrap_or_else(|| self.end_offset());
        syntax_error(self.src, offset, message)
    }

    fn atom(&mut self) -> Result<RatSymbol, ParseError> {
        match self.next() {
            Some(Spanned { tok: Tok::Int(n), .. }) => Ok(RatSymbol::constant(
                GaussianRational::from_rational(BigRational::from_integer(n)),
            )),
            Some(Spanned { tok: Tok::Ident(name), offset }) => self.lower_ident(&name, offset),
            Some(Spanned { tok: Tok::LParen, offset }) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Spanned { tok: Tok::RParen, .. }) => Ok(inner),
                    Some(Spanned { offset, .. }) => {
                        Err(syntax_error(self.src, offset, "expected `)`"))
                    }
                    None => Err(syntax_error(
                        self.src,
                        self.end_offset(),
                        format!("unbalanced `(` opened at byte {offset}"),
                    )),
                }
            }
            Some(Spanned { offset, .. }) => {
                Err(syntax_error(self.src, offset, "expected a number, name or `(`"))
            }
            None => Err(syntax_error(self.src, self.end_offset(), "unexpected end of input")),
        }
    }

    fn lower_ident(&self, name: &str, offset: usize) -> Result<RatSymbol, ParseError> {
        match name {
            "i" => Ok(RatSymbol::constant(GaussianRational::i())),
            "p" => Ok(RatSymbol::var(Variable::P)),
            "q" => Ok(RatSymbol::var(Variable::Q)),
            "hbar" => Ok(RatSymbol::var(Variable::Hbar)),
            "gamma" => Ok(RatSymbol::var(Variable::Gamma)),
            other if self.params.iter().any(|p| p == other) => {
                Ok(RatSymbol::from(PolySymbol::var(Variable::param(other))))
            }
            other => {
                let (line, col) = line_col(self.src, offset);
                Err(ParseError::UnknownSymbol { offset, line, col, name: other.to_string() })
            }
        }
    }
}

/// Parse `text` into a normalized rational symbol. `params` declares
/// parameter names usable alongside `p`, `q`, `hbar`, `gamma` and `i`.
pub fn parse(text: &str, params: &[String]) -> Result<RatSymbol, ParseError> {
    for p in params {
        if RESERVED.contains(&p.as_str()) {
            return Err(ParseError::ReservedParameter(p.clone()));
        }
    }
    let toks = Lexer::new(text).tokens(text)?;
    if toks.is_empty() {
        return Err(syntax_error(text, 0, "empty expression"));
    }
    let mut parser = Parser { src: text, toks, pos: 0, params };
    let value = parser.expr()?;
    if let Some(t) = parser.peek() {
        return Err(syntax_error(text, t.offset, "unexpected trailing input"));
    }
    Ok(value)
}

/// Convenience wrapper taking `&str` parameter names.
pub fn parse_with(text: &str, params: &[&str]) -> Result<RatSymbol, ParseError> {
    let owned: Vec<String> = params.iter().map(|s| s.to_string()).collect();
    parse(text, &owned)
}

impl From<AlgebraError> for ParseError {
    fn from(e: AlgebraError) -> Self {
        ParseError::Syntax { offset: 0, line: 1, col: 1, message: e.to_string() }
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
    fn gamma() -> PolySymbol {
        PolySymbol::var(Variable::Gamma)
    }

    #[test]
    fn monomial_parse() {
        let f = parse_with("p^2*q", &[]).unwrap();
        assert_eq!(f, RatSymbol::from(&p().pow(2) * &q()));
    }

    #[test]
    fn corr11_q_image() {
        let f = parse_with("q*(1+gamma*p)^2", &[]).unwrap();
        let w = &PolySymbol::one() + &(&gamma() * &p());
        assert_eq!(f, RatSymbol::from(&q() * &w.pow(2)));
    }

    #[test]
    fn unbalanced_paren_reports_end_offset() {
        let text = "p/(1+gamma*p";
        match parse_with(text, &[]) {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, text.len()),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_symbol() {
        match parse_with("p + z", &[]) {
            Err(ParseError::UnknownSymbol { name, col, .. }) => {
                assert_eq!(name, "z");
                assert_eq!(col, 5);
            }
            other => panic!("expected unknown symbol, got {other:?}"),
        }
    }

    #[test]
    fn negative_exponent() {
        assert!(matches!(
            parse_with("p^-2", &[]),
            Err(ParseError::NegativeExponent { .. })
        ));
    }

    #[test]
    fn division_by_zero_literal() {
        assert!(matches!(
            parse_with("p/(q - q)", &[]),
            Err(ParseError::DivisionByZero { .. })
        ));
    }

    #[test]
    fn precedence_and_associativity() {
        // 1 - 2 - 3 = -4, left associative
        let f = parse_with("1 - 2 - 3", &[]).unwrap();
        assert_eq!(f, RatSymbol::from_int(-4));
        // 12/2/3 = 2
        let g = parse_with("12/2/3", &[]).unwrap();
        assert_eq!(g, RatSymbol::from_int(2));
        // -p^2 is -(p^2)
        let h = parse_with("-p^2", &[]).unwrap();
        assert_eq!(h, RatSymbol::from(-&p().pow(2)));
        // ^ before *
        let k = parse_with("2*p^3", &[]).unwrap();
        assert_eq!(k, RatSymbol::from(p().pow(3).scale(&GaussianRational::from_int(2))));
    }

    #[test]
    fn params_and_reserved() {
        assert!(parse_with("a*p", &["a"]).is_ok());
        assert!(matches!(
            parse("a", &["i".to_string()]),
            Err(ParseError::ReservedParameter(_))
        ));
    }

    #[test]
    fn decimal_rejected() {
        assert!(matches!(parse_with("1.5*p", &[]), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn error_display_format() {
        let e = parse_with("p +\n z", &[]).unwrap_err();
        assert_eq!(e.to_string(), "2:2: unknown symbol `z`");
    }
}
