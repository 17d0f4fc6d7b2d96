//! Text and JSON syntax for ring elements and skew polynomials.
//!
//! Elements: `0`, `1`, `2`, `a`, `a^3`, `[c0,c1,...]` (polynomial-basis
//! coefficients), and sums/products of those with parentheses, e.g.
//! `(a+1)*a^2`. Polynomials: terms `coef*x^i*y^j` joined by `+` or `-`, with
//! the coefficient written before the indeterminates (it is a left
//! coefficient), e.g. `a^2*x^2*y + x + 1`. Negative exponents are accepted.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Element, Ring};
use crate::skew_poly::{QuasiDegree, SkewPoly, SkewRing};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(u64),
    A,
    X,
    Y,
    Caret,
    Star,
    Plus,
    Minus,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '0'..='9' => {
                let mut v: u64 = 0;
                while let Some(&d) = chars.peek() {
                    let Some(dv) = d.to_digit(10) else { break };
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(dv as u64))
                        .ok_or_else(|| Error::Parse("integer literal too large".into()))?;
                    chars.next();
                }
                out.push(Token::Int(v));
            }
            _ => {
                chars.next();
                out.push(match c {
                    'a' => Token::A,
                    'x' => Token::X,
                    'y' => Token::Y,
                    '^' => Token::Caret,
                    '*' => Token::Star,
                    '+' => Token::Plus,
                    '-' | '−' => Token::Minus,
                    '(' => Token::LParen,
                    ')' => Token::RParen,
                    '[' => Token::LBracket,
                    ']' => Token::RBracket,
                    ',' => Token::Comma,
                    other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
                });
            }
        }
    }
    Ok(out)
}

/// A parsed term c·x^i y^j.
type Term = (Element, i64, i64);

struct Parser<'a> {
    ring: &'a Ring,
    tokens: Vec<Token>,
    pos: usize,
    allow_xy: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(Error::Parse(format!("expected {want:?}, found {other:?}"))),
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.peek() != Some(&Token::Caret) {
            return Ok(1);
        }
        self.next();
        let (neg, paren) = match self.peek() {
            Some(Token::Minus) => {
                self.next();
                (true, false)
            }
            Some(Token::LParen) => {
                self.next();
                let neg = self.peek() == Some(&Token::Minus);
                if neg {
                    self.next();
                }
                (neg, true)
            }
            _ => (false, false),
        };
        let v = match self.next() {
            Some(Token::Int(v)) => i64::try_from(v).map_err(|_| Error::Parse("exponent too large".into()))?,
            other => return Err(Error::Parse(format!("expected exponent, found {other:?}"))),
        };
        if paren {
            self.expect(Token::RParen)?;
        }
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        let mut sign = match self.peek() {
            Some(Token::Minus) => {
                self.next();
                -1
            }
            Some(Token::Plus) => {
                self.next();
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            out.extend(
                t.into_iter()
                    .map(|(c, i, j)| (if sign < 0 { self.ring.neg(c) } else { c }, i, j)),
            );
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    sign = 1;
                }
                Some(Token::Minus) => {
                    self.next();
                    sign = -1;
                }
                _ => return Ok(out),
            }
        }
    }

    fn term(&mut self) -> Result<Vec<Term>> {
        let mut acc: Vec<Term> = vec![(self.ring.one(), 0, 0)];
        let mut seen_indeterminate = false;
        loop {
            let f = self.factor()?;
            let is_monomial = f.iter().any(|&(_, i, j)| i != 0 || j != 0);
            if is_monomial {
                seen_indeterminate = true;
            } else if seen_indeterminate {
                return Err(Error::Parse("coefficients must be written before x and y".into()));
            }
            let mut next = Vec::with_capacity(acc.len() * f.len());
            for &(c1, i1, j1) in &acc {
                for &(c2, i2, j2) in &f {
                    next.push((self.ring.mul(c1, c2), i1 + i2, j1 + j2));
                }
            }
            acc = next;
            if self.peek() == Some(&Token::Star) {
                self.next();
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Vec<Term>> {
        match self.next() {
            Some(Token::Int(v)) => {
                let c = self.ring.characteristic() as u64;
                Ok(vec![(self.ring.from_int((v % c) as i64), 0, 0)])
            }
            Some(Token::A) => {
                if !self.ring.is_field() {
                    return Err(Error::Parse(format!(
                        "`a` is not defined in {}",
                        self.ring.name()
                    )));
                }
                let e = self.exponent()?;
                let g = self.ring.generator();
                let c = if e >= 0 {
                    self.ring.pow(g, e as u64)
                } else {
                    self.ring.pow(self.ring.inverse(g)?, e.unsigned_abs())
                };
                Ok(vec![(c, 0, 0)])
            }
            Some(t @ (Token::X | Token::Y)) => {
                if !self.allow_xy {
                    return Err(Error::Parse("x and y are not allowed in an element".into()));
                }
                let e = self.exponent()?;
                let one = self.ring.one();
                Ok(vec![if t == Token::X { (one, e, 0) } else { (one, 0, e) }])
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                if inner.iter().any(|&(_, i, j)| i != 0 || j != 0) {
                    return Err(Error::Parse("parenthesised factors must be ring elements".into()));
                }
                let sum = inner
                    .iter()
                    .fold(self.ring.zero(), |acc, &(c, _, _)| self.ring.add(acc, c));
                Ok(vec![(sum, 0, 0)])
            }
            Some(Token::LBracket) => {
                let mut coeffs = Vec::new();
                loop {
                    match self.next() {
                        Some(Token::Int(v)) => coeffs.push(
                            u32::try_from(v).map_err(|_| Error::Parse("coefficient too large".into()))?,
                        ),
                        other => return Err(Error::Parse(format!("expected coefficient, found {other:?}"))),
                    }
                    match self.next() {
                        Some(Token::Comma) => continue,
                        Some(Token::RBracket) => break,
                        other => return Err(Error::Parse(format!("expected `,` or `]`, found {other:?}"))),
                    }
                }
                Ok(vec![(self.ring.from_coeffs(&coeffs)?, 0, 0)])
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn parse_terms(ring: &Ring, s: &str, allow_xy: bool) -> Result<Vec<Term>> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut p = Parser {
        ring,
        tokens,
        pos: 0,
        allow_xy,
    };
    let terms = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input after position {} in `{s}`",
            p.pos
        )));
    }
    Ok(terms)
}

impl Ring {
    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let terms = parse_terms(self, s, false)?;
        Ok(terms.iter().fold(self.zero(), |acc, &(c, _, _)| self.add(acc, c)))
    }

    /// Decimal for prime fields and Z_n; a polynomial in `a` otherwise.
    pub fn format_element(&self, e: Element) -> String {
        if !self.is_field() || self.degree() == 1 {
            return e.index().to_string();
        }
        let coeffs = self.coeffs(e);
        let parts: Vec<String> = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}*a"),
                (k, 1) => format!("a^{k}"),
                (k, c) => format!("{c}*a^{k}"),
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

impl SkewPoly {
    pub fn parse(ctx: &SkewRing, s: &str) -> Result<SkewPoly> {
        let terms = parse_terms(ctx.ring(), s, true)?;
        Ok(ctx.from_terms(terms.into_iter().map(|(c, i, j)| (QuasiDegree::new(i, j), c))))
    }

    pub fn to_doc(&self) -> PolyDoc {
        PolyDoc {
            terms: self
                .terms()
                .rev()
                .map(|(d, c)| TermDoc {
                    i: d.i,
                    j: d.j,
                    c: self.ring().format_element(c),
                })
                .collect(),
        }
    }

    pub fn from_doc(ctx: &SkewRing, doc: &PolyDoc) -> Result<SkewPoly> {
        let ring = ctx.ring();
        let terms = doc
            .terms
            .iter()
            .map(|t| Ok((QuasiDegree::new(t.i, t.j), ring.parse_element(&t.c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ctx.from_terms(terms))
    }
}

/// JSON form of a polynomial: `{"terms":[{"i":2,"j":1,"c":"a^2"}, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub i: i64,
    pub j: i64,
    pub c: String,
}

fn format_power(var: char, e: i64) -> String {
    if e == 1 {
        var.to_string()
    } else {
        format!("{var}^{e}")
    }
}

impl fmt::Display for SkewPoly {
    /// Terms in descending ⇒ order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ring = self.ring();
        let mut first = true;
        for (d, c) in self.terms().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            let coef = ring.format_element(c);
            let has_monomial = d.i != 0 || d.j != 0;
            if !has_monomial {
                factors.push(coef);
            } else if !ring.is_one(c) {
                if coef.contains('+') {
                    factors.push(format!("({coef})"));
                } else {
                    factors.push(coef);
                }
            }
            if d.i != 0 {
                factors.push(format_power('x', d.i));
            }
            if d.j != 0 {
                factors.push(format_power('y', d.j));
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
