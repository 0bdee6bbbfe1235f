//! Exact multivariate polynomial arithmetic over a fixed ring
//! K[x1, ..., xn] with a fixed monomial order.

pub mod counting;
pub mod division;
pub mod field;
pub mod monomial;
pub mod order;
pub mod parse;

use std::cmp::Ordering;
use std::fmt;

pub use counting::{count_monomials, CountMode};
pub use division::{normal_form, s_polynomial};
pub use field::{Coeff, FieldKind};
pub use monomial::Monomial;
pub use order::{MonomialOrder, OrderKind};

use crate::error::{Error, Result};

/// A coefficient–monomial pair.
pub type Term = (Coeff, Monomial);

/// The ambient ring of a computation: variable count, coefficient field,
/// and the monomial order everything is sorted by.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ring {
    pub n: usize,
    pub field: FieldKind,
    pub order: MonomialOrder,
}

impl Ring {
    pub fn new(n: usize, field: FieldKind, order: MonomialOrder) -> Self {
        Ring { n, field, order }
    }

    pub fn rational_grevlex(n: usize) -> Self {
        Ring::new(n, FieldKind::Rational, MonomialOrder::grevlex())
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vars={} order={} field={}", self.n, self.order, self.field)
    }
}

/// A polynomial in canonical form: terms strictly decreasing in the order
/// they were constructed with, no zero coefficients stored. The zero
/// polynomial is the empty term list.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    arity: usize,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial {
            arity,
            terms: Vec::new(),
        }
    }

    pub fn constant(c: Coeff, arity: usize) -> Self {
        if c.is_zero() {
            return Polynomial::zero(arity);
        }
        Polynomial {
            arity,
            terms: vec![(c, Monomial::one(arity))],
        }
    }

    /// Sorts, merges equal monomials, and drops zero coefficients.
    pub fn from_terms(mut terms: Vec<Term>, ord: &MonomialOrder, arity: usize) -> Self {
        for (_, m) in &terms {
            assert_eq!(m.arity(), arity, "monomial arity mismatch");
        }
        terms.sort_by(|a, b| ord.compare(&b.1, &a.1));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for (c, m) in terms {
            match merged.last_mut() {
                Some((lc, lm)) if *lm == m => *lc = lc.add(&c),
                _ => merged.push((c, m)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        Polynomial {
            arity,
            terms: merged,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    /// The initial (leading) term; `None` for the zero polynomial.
    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(_, m)| m)
    }

    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.first().map(|(c, _)| c)
    }

    /// Max total degree over terms; `None` for zero.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(_, m)| m.total_degree()).max()
    }

    /// Number of variables appearing in some term.
    pub fn support(&self) -> usize {
        (0..self.arity)
            .filter(|&i| self.terms.iter().any(|(_, m)| m.exponents()[i] > 0))
            .count()
    }

    /// All terms share one total degree (includes the zero polynomial).
    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((_, m)) => {
                let d = m.total_degree();
                self.terms.iter().all(|(_, m)| m.total_degree() == d)
            }
        }
    }

    /// Merges two sorted term lists. Panics on mismatched arity or field.
    pub fn add(&self, other: &Polynomial, ord: &MonomialOrder) -> Polynomial {
        assert_eq!(self.arity, other.arity, "ring mismatch: arity");
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match ord.compare(&self.terms[i].1, &other.terms[j].1) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].0.add(&other.terms[j].0);
                    if !c.is_zero() {
                        out.push((c, self.terms[i].1.clone()));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial {
            arity: self.arity,
            terms: out,
        }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(c, m)| (c.neg(), m.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial, ord: &MonomialOrder) -> Polynomial {
        self.add(&other.neg(), ord)
    }

    /// Multiplies by a scalar; zero scalar annihilates.
    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(tc, m)| (tc.mul(c), m.clone()))
                .collect(),
        }
    }

    /// Multiplies every term by `c * m`. Order is preserved because the
    /// order is multiplicative.
    pub fn mul_term(&self, c: &Coeff, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(tc, tm)| (tc.mul(c), tm.mul(m)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(tc, tm)| (tc.clone(), tm.mul(m)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial, ord: &MonomialOrder) -> Polynomial {
        assert_eq!(self.arity, other.arity, "ring mismatch: arity");
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (c1, m1) in &self.terms {
            for (c2, m2) in &other.terms {
                terms.push((c1.mul(c2), m1.mul(m2)));
            }
        }
        Polynomial::from_terms(terms, ord, self.arity)
    }

    /// Monic canonical form: leading coefficient scaled to 1.
    pub fn normalize(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.inv()),
        }
    }

    /// Builds from terms already strictly decreasing in the active order.
    pub(crate) fn from_sorted_terms(terms: Vec<Term>, arity: usize) -> Polynomial {
        Polynomial { arity, terms }
    }

    pub(crate) fn pop_leading(&mut self) {
        if !self.terms.is_empty() {
            self.terms.remove(0);
        }
    }
}

/// The presented ideal: an ordered list of nonzero generators over one ring.
/// Generator indices are the lineage leaves.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub ring: Ring,
    pub generators: Vec<Polynomial>,
}

impl GeneratorSet {
    pub fn new(ring: Ring, generators: Vec<Polynomial>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Config("generator set is empty".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.is_zero() {
                return Err(Error::Config(format!("generator {i} is zero")));
            }
            if g.arity() != ring.n {
                return Err(Error::Config(format!(
                    "generator {i} has arity {} but the ring has {} variables",
                    g.arity(),
                    ring.n
                )));
            }
            if let Some(c) = g.leading_coeff() {
                if c.field() != ring.field {
                    return Err(Error::Config(format!(
                        "generator {i} has coefficients in {} but the ring is over {}",
                        c.field(),
                        ring.field
                    )));
                }
            }
        }
        Ok(GeneratorSet { ring, generators })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}
