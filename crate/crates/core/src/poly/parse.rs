//! Text grammar for polynomials and ring headers.
//!
//! Terms are joined by `+`/`-`; a term is an optional integer or rational
//! coefficient followed by `*`-separated powers such as `x3^2`. Variables
//! are named `x1..xn`; whitespace is insignificant.
//! Examples: `x1^2 - x2`, `3/2*x1*x3 + 1`.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poly::{Coeff, FieldKind, Monomial, MonomialOrder, OrderKind, Polynomial, Ring, Term};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(i64),
    Var(usize), // zero-based
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&ch) = chars.peek() {
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Token::Plus);
            }
            '-' => {
                chars.next();
                out.push(Token::Minus);
            }
            '*' => {
                chars.next();
                out.push(Token::Star);
            }
            '/' => {
                chars.next();
                out.push(Token::Slash);
            }
            '^' => {
                chars.next();
                out.push(Token::Caret);
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let v: i64 = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("integer `{s}` out of range")))?;
                out.push(Token::Int(v));
            }
            'x' => {
                chars.next();
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let idx: usize = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable `x{s}`")))?;
                if idx == 0 {
                    return Err(Error::Parse("variables are numbered from x1".into()));
                }
                out.push(Token::Var(idx - 1));
            }
            other => {
                return Err(Error::Parse(format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    ring: &'a Ring,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse_poly(&mut self) -> Result<Polynomial> {
        let mut terms: Vec<Term> = Vec::new();
        let mut sign = 1i64;
        // Optional leading sign.
        match self.peek() {
            Some(Token::Minus) => {
                sign = -1;
                self.pos += 1;
            }
            Some(Token::Plus) => {
                self.pos += 1;
            }
            _ => {}
        }
        loop {
            let (coeff, mono) = self.parse_term(sign)?;
            terms.push((coeff, mono));
            match self.next() {
                None => break,
                Some(Token::Plus) => sign = 1,
                Some(Token::Minus) => sign = -1,
                Some(other) => {
                    return Err(Error::Parse(format!(
                        "expected `+` or `-`, found {other:?}"
                    )));
                }
            }
        }
        Ok(Polynomial::from_terms(terms, &self.ring.order, self.ring.n))
    }

    fn parse_term(&mut self, sign: i64) -> Result<Term> {
        let field = self.ring.field;
        let mut coeff: Option<Coeff> = None;
        if let Some(Token::Int(num)) = self.peek() {
            let num = *num;
            self.pos += 1;
            let c = if matches!(self.peek(), Some(Token::Slash)) {
                self.pos += 1;
                match self.next() {
                    Some(Token::Int(den)) => Coeff::from_ratio(sign * num, *den, field)?,
                    _ => return Err(Error::Parse("expected denominator after `/`".into())),
                }
            } else {
                Coeff::from_i64(sign * num, field)
            };
            coeff = Some(c);
            // Optional `*` between the coefficient and the first variable.
            if matches!(self.peek(), Some(Token::Star)) {
                self.pos += 1;
                if !matches!(self.peek(), Some(Token::Var(_))) {
                    return Err(Error::Parse("expected a variable after `*`".into()));
                }
            }
        }
        let mut exps = vec![0u32; self.ring.n];
        let mut saw_var = false;
        while let Some(Token::Var(idx)) = self.peek() {
            let idx = *idx;
            self.pos += 1;
            if idx >= self.ring.n {
                return Err(Error::Parse(format!(
                    "variable x{} exceeds the ring's {} variables",
                    idx + 1,
                    self.ring.n
                )));
            }
            let mut e = 1u32;
            if matches!(self.peek(), Some(Token::Caret)) {
                self.pos += 1;
                match self.next() {
                    Some(Token::Int(v)) if *v >= 0 => {
                        e = u32::try_from(*v)
                            .map_err(|_| Error::Parse(format!("exponent {v} too large")))?;
                    }
                    _ => return Err(Error::Parse("expected a nonnegative exponent".into())),
                }
            }
            saw_var = true;
            exps[idx] = exps[idx]
                .checked_add(e)
                .ok_or_else(|| Error::Parse("exponent overflow".into()))?;
            if matches!(self.peek(), Some(Token::Star)) {
                self.pos += 1;
                if !matches!(self.peek(), Some(Token::Var(_))) {
                    return Err(Error::Parse("expected a variable after `*`".into()));
                }
            } else {
                break;
            }
        }
        if coeff.is_none() && !saw_var {
            return Err(Error::Parse("empty term".into()));
        }
        let coeff = coeff.unwrap_or_else(|| Coeff::from_i64(sign, field));
        Ok((coeff, Monomial::new(exps)))
    }
}

/// Parses one polynomial in the text grammar against a ring.
pub fn parse_polynomial(src: &str, ring: &Ring) -> Result<Polynomial> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        ring,
    };
    parser.parse_poly()
}

/// Renders a polynomial in the same grammar `parse_polynomial` accepts.
pub fn format_polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (c, m)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mag = c.abs();
        if m.is_one() {
            let _ = write!(out, "{mag}");
        } else if mag.is_one() {
            let _ = write!(out, "{m}");
        } else {
            let _ = write!(out, "{mag}*{m}");
        }
    }
    out
}

/// Parses a `vars=<n> order=<ord> field=<f>` header line.
pub fn parse_ring_header(line: &str) -> Result<Ring> {
    let mut n: Option<usize> = None;
    let mut order: Option<OrderKind> = None;
    let mut field: Option<FieldKind> = None;
    for part in line.split_whitespace() {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header entry `{part}`")))?;
        match key {
            "vars" => {
                n = Some(
                    value
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable count `{value}`")))?,
                );
            }
            "order" => order = Some(OrderKind::from_str(value)?),
            "field" => field = Some(FieldKind::from_str(value)?),
            other => return Err(Error::Parse(format!("unknown header key `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| Error::Parse("header is missing vars=".into()))?;
    if n == 0 {
        return Err(Error::Parse("vars must be at least 1".into()));
    }
    let order = order.ok_or_else(|| Error::Parse("header is missing order=".into()))?;
    let field = field.ok_or_else(|| Error::Parse("header is missing field=".into()))?;
    Ok(Ring::new(n, field, MonomialOrder::new(order)))
}
