//! Monomial orders: lex, graded lex, and graded reverse lex, with an
//! optional variable-precedence permutation (default x1 > x2 > ... > xn).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::monomial::Monomial;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Lex,
    Grlex,
    Grevlex,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            OrderKind::Lex => "lex",
            OrderKind::Grlex => "grlex",
            OrderKind::Grevlex => "grevlex",
        };
        write!(f, "{name}")
    }
}

impl FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "lex" => Ok(OrderKind::Lex),
            "grlex" => Ok(OrderKind::Grlex),
            "grevlex" => Ok(OrderKind::Grevlex),
            other => Err(Error::Parse(format!("unknown monomial order `{other}`"))),
        }
    }
}

/// A strict total, multiplicative well-order on monomials of one arity.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    /// `precedence[i]` is the variable index ranked i-th most significant.
    /// `None` means the identity (x1 highest).
    pub precedence: Option<Vec<usize>>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind) -> Self {
        MonomialOrder {
            kind,
            precedence: None,
        }
    }

    pub fn lex() -> Self {
        Self::new(OrderKind::Lex)
    }

    pub fn grlex() -> Self {
        Self::new(OrderKind::Grlex)
    }

    pub fn grevlex() -> Self {
        Self::new(OrderKind::Grevlex)
    }

    /// Same kind, custom variable significance. `precedence` must be a
    /// permutation of 0..n.
    pub fn with_precedence(kind: OrderKind, precedence: Vec<usize>) -> Result<Self, Error> {
        let n = precedence.len();
        let mut seen = vec![false; n];
        for &i in &precedence {
            if i >= n || seen[i] {
                return Err(Error::Config(format!(
                    "precedence {precedence:?} is not a permutation of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(MonomialOrder {
            kind,
            precedence: Some(precedence),
        })
    }

    #[inline]
    fn exp(&self, m: &Monomial, pos: usize) -> u32 {
        match &self.precedence {
            None => m.exponents()[pos],
            Some(p) => m.exponents()[p[pos]],
        }
    }

    /// Compares two monomials of equal arity; panics on mismatched arity.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        assert_eq!(a.arity(), b.arity(), "monomial arity mismatch");
        if let Some(p) = &self.precedence {
            assert_eq!(p.len(), a.arity(), "precedence arity mismatch");
        }
        let n = a.arity();
        match self.kind {
            OrderKind::Lex => self.lex_compare(a, b, n),
            OrderKind::Grlex => match a.total_degree().cmp(&b.total_degree()) {
                Ordering::Equal => self.lex_compare(a, b, n),
                ord => ord,
            },
            OrderKind::Grevlex => match a.total_degree().cmp(&b.total_degree()) {
                Ordering::Equal => {
                    // Rightmost (least significant) differing exponent,
                    // smaller exponent wins.
                    for pos in (0..n).rev() {
                        let (ea, eb) = (self.exp(a, pos), self.exp(b, pos));
                        if ea != eb {
                            return eb.cmp(&ea);
                        }
                    }
                    Ordering::Equal
                }
                ord => ord,
            },
        }
    }

    fn lex_compare(&self, a: &Monomial, b: &Monomial, n: usize) -> Ordering {
        for pos in 0..n {
            let (ea, eb) = (self.exp(a, pos), self.exp(b, pos));
            if ea != eb {
                return ea.cmp(&eb);
            }
        }
        Ordering::Equal
    }

    /// Max of two monomials under this order.
    pub fn max<'a>(&self, a: &'a Monomial, b: &'a Monomial) -> &'a Monomial {
        if self.compare(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}
