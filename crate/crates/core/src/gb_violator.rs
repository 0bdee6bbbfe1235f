//! The Gröbner violator space: polynomials violate a subset exactly when
//! their initial monomial escapes the monomial ideal spanned by the
//! subset's initial monomials. Bases of the full universe are minimal
//! Gröbner bases whenever the universe contains one.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use crate::buchberger::{buchberger, minimalize, BuchbergerOptions, Strategy};
use crate::error::{Error, Result};
use crate::poly::parse::{format_polynomial, parse_polynomial, parse_ring_header};
use crate::poly::{GeneratorSet, Monomial, MonomialOrder, Polynomial, Ring};
use crate::violator::{BasisResult, Sampler, SamplerConfig, ViolatorSpace};

/// A deduplicated universe of monic nonzero polynomials over one ring,
/// indexed for fast leading-monomial divisibility scans.
#[derive(Clone, Debug)]
pub struct GroebnerViolatorSpace {
    ring: Ring,
    elements: Vec<Polynomial>,
    lead_index: HashMap<Monomial, Vec<usize>>,
}

impl GroebnerViolatorSpace {
    /// Normalizes to monic form, drops zeros, deduplicates structurally,
    /// and sorts into a canonical order, so construction is deterministic
    /// whatever order the inputs arrived in.
    pub fn new(ring: Ring, polys: Vec<Polynomial>) -> Result<Self> {
        let mut seen: HashSet<Polynomial> = HashSet::new();
        let mut elements: Vec<Polynomial> = Vec::new();
        for p in polys {
            if p.is_zero() {
                continue;
            }
            if p.arity() != ring.n {
                return Err(Error::Config(format!(
                    "universe element has arity {} but the ring has {} variables",
                    p.arity(),
                    ring.n
                )));
            }
            if p.leading_coeff().map(|c| c.field()) != Some(ring.field) {
                return Err(Error::Config(
                    "universe element has coefficients outside the ring's field".into(),
                ));
            }
            let monic = p.normalize();
            if seen.insert(monic.clone()) {
                elements.push(monic);
            }
        }
        let ord = ring.order.clone();
        elements.sort_by(|a, b| canonical_cmp(a, b, &ord));
        let mut lead_index: HashMap<Monomial, Vec<usize>> = HashMap::new();
        for (i, p) in elements.iter().enumerate() {
            lead_index
                .entry(p.leading_monomial().unwrap().clone())
                .or_default()
                .push(i);
        }
        Ok(GroebnerViolatorSpace {
            ring,
            elements,
            lead_index,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Polynomial {
        &self.elements[i]
    }

    /// Indices of elements sharing this exact leading monomial.
    pub fn with_leading_monomial(&self, m: &Monomial) -> &[usize] {
        self.lead_index.get(m).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The primitive: `h` violates `set` iff its initial monomial is not
    /// divisible by any initial monomial of the set — membership of
    /// init(h) in the monomial ideal spanned by the set's initial terms.
    /// Everything violates the empty set.
    pub fn gb_violates(&self, h: usize, set: &[usize]) -> bool {
        let lead = self.elements[h].leading_monomial().unwrap();
        !set.iter()
            .any(|&s| self.elements[s].leading_monomial().unwrap().divides(lead))
    }

    /// Alternative primitive that reads the initial ideal of the ideal
    /// *generated by* the subset: it runs a full Buchberger computation on
    /// the subset before the divisibility test. Strictly coarser than
    /// [`GroebnerViolatorSpace::gb_violates`] (it reports a subset of the
    /// violators) and much more expensive; kept for experiments, never
    /// used by the sampling pipeline.
    pub fn gb_violates_ideal(&self, h: usize, set: &[usize]) -> Result<bool> {
        if set.is_empty() {
            return Ok(true);
        }
        let polys: Vec<Polynomial> = set.iter().map(|&s| self.elements[s].clone()).collect();
        let gens = GeneratorSet::new(self.ring.clone(), polys)?;
        let basis = minimalize(&buchberger(
            &gens,
            &BuchbergerOptions {
                strategy: Strategy::Degree,
                coprime_criterion: false,
                max_pairs: Some(200_000),
            },
        )?);
        let lead = self.elements[h].leading_monomial().unwrap();
        Ok(!basis
            .elements
            .iter()
            .any(|(p, _)| p.leading_monomial().unwrap().divides(lead)))
    }

    /// A minimal basis of `g`: one representative per minimal leading
    /// monomial of the subset, computed by a single divisibility-filtering
    /// sweep instead of subset enumeration. Ties between elements sharing
    /// a minimal leading monomial go to the representative preferred by
    /// [`tie_break_cmp`]. Result is sorted by index.
    pub fn specialized_basis(&self, g: &[usize]) -> Vec<usize> {
        let ordered = self.scan_order(g);
        let mut basis: Vec<usize> = Vec::new();
        for h in ordered {
            if self.gb_violates(h, &basis) {
                let pos = basis.binary_search(&h).unwrap_err();
                basis.insert(pos, h);
            }
        }
        basis
    }

    /// Degree-ascending scan order with deterministic tie-breaks; every
    /// strict divisor precedes its multiples, so greedy filtering in this
    /// order yields exactly the minimal representatives.
    fn scan_order(&self, g: &[usize]) -> Vec<usize> {
        let mut ordered: Vec<usize> = g.to_vec();
        let ord = &self.ring.order;
        ordered.sort_by(|&a, &b| {
            let (pa, pb) = (&self.elements[a], &self.elements[b]);
            let (la, lb) = (
                pa.leading_monomial().unwrap(),
                pb.leading_monomial().unwrap(),
            );
            la.total_degree()
                .cmp(&lb.total_degree())
                .then_with(|| ord.compare(la, lb))
                .then_with(|| tie_break_cmp(pa, pb, ord))
        });
        ordered
    }

    /// Test oracle: the basis of the whole universe via the specialized
    /// sweep, cross-checked against generic subset-enumeration brute force
    /// when the universe is small enough to afford it (|H| <= 12).
    pub fn largest_basis_bruteforce(&self) -> Result<Vec<usize>> {
        let fast = self.specialized_basis(&(0..self.len()).collect::<Vec<_>>());
        if self.len() <= 12 {
            let mut sampler = Sampler::with_config(
                self,
                SamplerConfig {
                    prefer_greedy: false,
                    ..Default::default()
                },
            );
            let slow = sampler.brute_force_basis(&(0..self.len()).collect::<Vec<_>>());
            let fast_leads = self.lead_set(&fast);
            let slow_leads = self.lead_set(&slow);
            if fast_leads != slow_leads {
                return Err(Error::Internal(format!(
                    "specialized basis disagrees with brute force: {fast_leads:?} vs {slow_leads:?}"
                )));
            }
        }
        Ok(fast)
    }

    /// The set of leading monomials of the given elements.
    pub fn lead_set(&self, indices: &[usize]) -> std::collections::BTreeSet<Monomial> {
        indices
            .iter()
            .map(|&i| self.elements[i].leading_monomial().unwrap().clone())
            .collect()
    }

    /// Clarkson sampling over this universe with dimension estimate `k`.
    /// Fails with a round-cap error when `k` is far too small for the
    /// universe or the universe is corrupt.
    pub fn spark_basis(&self, k: usize, seed: u64) -> Result<BasisResult> {
        self.spark_basis_with(k, seed, SamplerConfig::default())
    }

    pub fn spark_basis_with(
        &self,
        k: usize,
        seed: u64,
        config: SamplerConfig,
    ) -> Result<BasisResult> {
        if k == 0 {
            return Err(Error::Config("dimension estimate k must be >= 1".into()));
        }
        let mut sampler = Sampler::with_config(self, config);
        sampler.run(k, seed)
    }

    /// Writes the universe file: a ring header then one element per line.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{}", self.ring)?;
        for p in &self.elements {
            writeln!(w, "{}", format_polynomial(p))?;
        }
        Ok(())
    }

    /// Reads a universe file produced by [`GroebnerViolatorSpace::write_to`].
    pub fn read_from(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty universe file".into()))??;
        let ring = parse_ring_header(&header)?;
        let mut polys = Vec::new();
        for line in lines {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            polys.push(parse_polynomial(trimmed, &ring)?);
        }
        GroebnerViolatorSpace::new(ring, polys)
    }
}

impl ViolatorSpace for GroebnerViolatorSpace {
    fn universe_size(&self) -> usize {
        self.len()
    }

    fn is_violator(&self, h: usize, set: &[usize]) -> bool {
        self.gb_violates(h, set)
    }

    fn greedy_basis_order(&self, subset: &[usize]) -> Option<Vec<usize>> {
        Some(self.scan_order(subset))
    }
}

/// Deterministic preference between polynomials sharing a minimal leading
/// monomial: fewest terms first, then term-by-term comparison of the
/// remaining monomials (smaller in the order wins), then lexicographic
/// coefficient comparison.
pub fn tie_break_cmp(a: &Polynomial, b: &Polynomial, ord: &MonomialOrder) -> Ordering {
    a.term_count()
        .cmp(&b.term_count())
        .then_with(|| {
            for ((_, ma), (_, mb)) in a.terms().iter().zip(b.terms()).skip(1) {
                match ord.compare(ma, mb) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        })
        .then_with(|| {
            for ((ca, _), (cb, _)) in a.terms().iter().zip(b.terms()) {
                match ca.cmp_total(cb) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        })
}

/// Total canonical order on universe elements: leading monomial ascending
/// in the active order, then the tie-break preference.
pub fn canonical_cmp(a: &Polynomial, b: &Polynomial, ord: &MonomialOrder) -> Ordering {
    ord.compare(
        a.leading_monomial().expect("nonzero universe element"),
        b.leading_monomial().expect("nonzero universe element"),
    )
    .then_with(|| tie_break_cmp(a, b, ord))
}
