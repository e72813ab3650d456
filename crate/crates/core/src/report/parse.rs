//! Recursive-descent parser for defining functions and curve files.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'i' | var | func '(' expr ')' | '(' expr ')'
//! var    := 'z1' | 'z2' | 'z3'            ('t' in curve files)
//! func   := 'conj' | 'Re' | 'Im' | 'abs2'
//! ```
//!
//! Numbers are exact: `0.125` is `1/8`. Division is only by nonzero constants.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::poly::coeff::{cr, cr_i, cr_real, format_cr};
use crate::poly::{ComplexRational, CurveJet, MixedPolynomial, Rational};

/// Cap used while parsing; the result is re-capped after the degree check.
const PARSE_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Num(decimal(&s).ok_or_else(|| ParseError { line: l0, column: c0, message: format!("bad number {s:?}") })?)
        } else if c.is_ascii_alphabetic() {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if "+-*/^()".contains(c) {
            i += 1;
            Tok::Op(c)
        } else {
            return Err(ParseError { line: l0, column: c0, message: format!("unexpected character {c:?}") });
        };
        column += i - start;
        out.push(Token { tok, line: l0, column: c0 });
    }
    out.push(Token { tok: Tok::End, line, column });
    Ok(out)
}

fn decimal(s: &str) -> Option<Rational> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if (int.is_empty() && frac.is_empty()) || frac.contains('.') {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().ok()?;
    Some(Rational::new(num, BigInt::from(10).pow(frac.len() as u32)))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Accepts `t` as the `z1` slot (curve components).
    curve: bool,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, at: &Token, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: at.line, column: at.column, message: message.into() })
    }

    fn expect(&mut self, op: char) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == Tok::Op(op) {
            Ok(())
        } else {
            self.error(&t, format!("expected '{op}'"))
        }
    }

    fn expr(&mut self) -> Result<MixedPolynomial, ParseError> {
        let mut acc = self.term()?;
        while let Tok::Op(op @ ('+' | '-')) = self.peek().tok {
            self.next();
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MixedPolynomial, ParseError> {
        let mut acc = self.unary()?;
        while let Tok::Op(op @ ('*' | '/')) = self.peek().tok {
            let at = self.next();
            let rhs = self.unary()?;
            if op == '*' {
                acc = &acc * &rhs;
                continue;
            }
            let c = match constant_value(&rhs) {
                Some(c) if !c.is_zero() => c,
                Some(_) => return self.error(&at, "division by zero"),
                None => return self.error(&at, "division by a non-constant expression"),
            };
            acc = acc.scale(&(ComplexRational::one() / c));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MixedPolynomial, ParseError> {
        match self.peek().tok {
            Tok::Op('-') => {
                self.next();
                Ok(-&self.unary()?)
            }
            Tok::Op('+') => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MixedPolynomial, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Op('^') {
            return Ok(base);
        }
        self.next();
        let t = self.next();
        match &t.tok {
            Tok::Num(q) if q.is_integer() && !q.numer().sign().eq(&num_bigint::Sign::Minus) => {
                let e: u32 = q.to_integer().try_into().or_else(|_| self.error(&t, "exponent too large"))?;
                if e > PARSE_CAP {
                    return self.error(&t, "exponent too large");
                }
                Ok(base.pow(e))
            }
            _ => self.error(&t, "exponent must be a nonnegative integer"),
        }
    }

    fn atom(&mut self) -> Result<MixedPolynomial, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Num(q) => Ok(MixedPolynomial::constant(cr_real(q.clone()), PARSE_CAP)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => Ok(MixedPolynomial::constant(cr_i(), PARSE_CAP)),
                "z1" | "z2" | "z3" if !self.curve => {
                    Ok(MixedPolynomial::z(name[1..].parse::<usize>().unwrap() - 1, PARSE_CAP))
                }
                "t" if self.curve => Ok(MixedPolynomial::z(0, PARSE_CAP)),
                "conj" | "Re" | "Im" | "abs2" => {
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect(')')?;
                    Ok(match name.as_str() {
                        "conj" => e.conjugate(),
                        "Re" => e.real_part(),
                        "Im" => (&e - &e.conjugate()).scale(&cr(Rational::zero(), -Rational::new(1.into(), 2.into()))),
                        _ => &e * &e.conjugate(),
                    })
                }
                other => self.error(&t, format!("unknown identifier {other:?}")),
            },
            Tok::End => self.error(&t, "unexpected end of input"),
            Tok::Op(c) => self.error(&t, format!("unexpected '{c}'")),
        }
    }
}

fn constant_value(p: &MixedPolynomial) -> Option<ComplexRational> {
    match p.degree() {
        None => Some(ComplexRational::zero()),
        Some(0) => Some(p.terms().next().map(|(_, c)| c.clone()).unwrap_or_else(ComplexRational::zero)),
        Some(_) => None,
    }
}

fn parse_expr(text: &str, curve: bool) -> Result<MixedPolynomial, ParseError> {
    let mut p = Parser { tokens: lex(text)?, pos: 0, curve };
    let e = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return p.error(&t, "trailing input");
    }
    if e.truncated() {
        return Err(ParseError { line: 1, column: 1, message: format!("degree exceeds parser cap {PARSE_CAP}") });
    }
    Ok(e)
}

/// Parses `R(z)` and re-caps it at `degree_cap` (or `deg R + 1` when `None`).
pub fn parse_defining_function(text: &str, degree_cap: Option<u32>) -> Result<MixedPolynomial, ParseError> {
    let p = parse_expr(text, false)?;
    if !p.is_real_valued() {
        return Err(ParseError { line: 1, column: 1, message: "expression is not real-valued".into() });
    }
    let deg = p.degree().unwrap_or(0);
    let cap = degree_cap.unwrap_or(deg + 1);
    if deg > cap {
        return Err(ParseError { line: 1, column: 1, message: format!("degree {deg} exceeds cap {cap}") });
    }
    Ok(p.with_cap(cap))
}

/// Curve file: lines `z1 = <expr in t>`, `z2 = ...`, `z3 = ...` (missing components are 0)
/// and optionally `order = N`. `#` starts a comment.
pub fn parse_curve(text: &str, default_order: u32) -> Result<CurveJet, ParseError> {
    let mut comps: [Option<MixedPolynomial>; 3] = [None, None, None];
    let mut order = default_order;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let err = |column: usize, message: String| ParseError { line, column, message };
        let Some((key, value)) = body.split_once('=') else {
            return Err(err(1, "expected `key = value`".into()));
        };
        let offset = key.len() + 2;
        match key.trim() {
            "order" => order = value.trim().parse().map_err(|e| err(offset, format!("order: {e}")))?,
            name @ ("z1" | "z2" | "z3") => {
                let slot = name[1..].parse::<usize>().unwrap() - 1;
                if comps[slot].is_some() {
                    return Err(err(1, format!("{name} given twice")));
                }
                let p = parse_expr(value, true).map_err(|e| err(e.column + offset - 1, e.message))?;
                comps[slot] = Some(p);
            }
            other => return Err(err(1, format!("unknown key {other:?}"))),
        }
    }
    let polys = comps.map(|c| c.unwrap_or_else(|| MixedPolynomial::zero(PARSE_CAP)));
    CurveJet::from_polynomials(&polys, order).map_err(|e| ParseError { line: 1, column: 1, message: e.to_string() })
}

/// Exact rational as `p/q` (or `p`).
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Exact complex coefficient in the input grammar.
pub fn format_coefficient(c: &ComplexRational) -> String {
    format_cr(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::coeff::{cr_one, rational};
    use crate::poly::MixedMonomial;

    fn abs2(a: [u32; 3], cap: u32) -> MixedPolynomial {
        MixedPolynomial::monomial(MixedMonomial::new(a, a), cr_one(), cap)
    }

    #[test]
    fn grammar_example() {
        let p = parse_defining_function("Re(z3) + abs2(z2) + abs2(z1)^2", None).unwrap();
        let cap = 5;
        assert_eq!(p, &(&MixedPolynomial::re_z(2, cap) + &abs2([0, 1, 0], cap)) + &abs2([2, 0, 0], cap));
    }

    #[test]
    fn non_real_is_rejected() {
        let e = parse_defining_function("Re(z3) + z1*conj(z2)", None).unwrap_err();
        assert!(e.message.contains("real-valued"));
    }

    #[test]
    fn rational_literal_is_exact() {
        let p = parse_defining_function("Re(z3) + (3/7)*abs2(z1)*abs2(z2)^2", None).unwrap();
        assert_eq!(p.coeff(&MixedMonomial::new([1, 2, 0], [1, 2, 0])), cr_real(rational(3, 7)));
        let q = parse_defining_function("Re(z3) + 0.125*abs2(z1)", None).unwrap();
        assert_eq!(q.coeff(&MixedMonomial::new([1, 0, 0], [1, 0, 0])), cr_real(rational(1, 8)));
    }

    #[test]
    fn im_and_i_agree() {
        let a = parse_defining_function("Im(z1^2)", None).unwrap();
        let b = parse_defining_function("(z1^2 - conj(z1)^2) / (2*i)", None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_defining_function("Re(z3) +\n  abs2(z4)", None).unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        let e = parse_defining_function("Re(z3) + ", None).unwrap_err();
        assert!(e.message.contains("end of input"));
        let e = parse_defining_function("z1 / z2", None).unwrap_err();
        assert!(e.message.contains("non-constant"));
        let e = parse_defining_function("abs2(z1)^3", Some(4)).unwrap_err();
        assert!(e.message.contains("exceeds cap"));
        assert!(parse_defining_function("Re(z3) $", None).is_err());
    }

    #[test]
    fn display_round_trips() {
        let p = parse_defining_function("Re(z3) + abs2(z1)^4 + (15/7)*abs2(z1)*Re(z1^6) + abs2(z2) - i*(z1^2 - conj(z1)^2)", None)
            .unwrap();
        let back = parse_defining_function(&p.to_string(), Some(p.degree_cap())).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn curve_file() {
        let c = parse_curve("# axis\nz1 = t\nz3 = -t^2 + i*t^3\norder = 6\n", 4).unwrap();
        assert_eq!(c.order(), 6);
        assert_eq!(c.component(0)[1], cr_one());
        assert_eq!(c.component(2)[3], cr_i());
        let e = parse_curve("z1 = t\nz2 = z1\n", 4).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_curve("z1 = 1 + t\n", 4).is_err());
    }
}
