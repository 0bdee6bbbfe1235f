//! Buchberger's algorithm with lineage tracking.
//!
//! This is the correctness oracle for the sampling engine: it yields the
//! ground-truth minimal basis size, verifies candidate bases through the
//! S-pair criterion, and records how every basis element arose.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::division::{divide, s_polynomial};
use crate::poly::{GeneratorSet, Polynomial, Ring};

/// How a basis element came to be: a generator index, or the pair of parent
/// lineages of the S-polynomial it is the reduced remainder of.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Lineage {
    Leaf(usize),
    Pair(Box<Lineage>, Box<Lineage>),
}

impl Lineage {
    pub fn pair(left: Lineage, right: Lineage) -> Self {
        Lineage::Pair(Box::new(left), Box::new(right))
    }

    /// Tree depth: 0 for a generator.
    pub fn depth(&self) -> u32 {
        match self {
            Lineage::Leaf(_) => 0,
            Lineage::Pair(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Number of leaf references (with multiplicity).
    pub fn leaf_count(&self) -> u64 {
        match self {
            Lineage::Leaf(_) => 1,
            Lineage::Pair(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }
}

impl fmt::Display for Lineage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lineage::Leaf(i) => write!(f, "{i}"),
            Lineage::Pair(l, r) => write!(f, "({l},{r})"),
        }
    }
}

/// S-pair selection strategy.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    /// Process pairs in the order they were enqueued.
    FirstCome,
    /// Smallest total degree of the pair's lcm first; ties by queue order.
    Degree,
}

/// Knobs for a Buchberger run.
#[derive(Clone, Debug)]
pub struct BuchbergerOptions {
    pub strategy: Strategy,
    /// Skip pairs with coprime leading monomials. Off by default so the
    /// oracle's pair processing (and hence lineages) stays transparent.
    pub coprime_criterion: bool,
    /// Abort after this many processed pairs.
    pub max_pairs: Option<u64>,
}

impl Default for BuchbergerOptions {
    fn default() -> Self {
        BuchbergerOptions {
            strategy: Strategy::FirstCome,
            coprime_criterion: false,
            max_pairs: None,
        }
    }
}

impl BuchbergerOptions {
    pub fn with_strategy(strategy: Strategy) -> Self {
        BuchbergerOptions {
            strategy,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Default, Debug)]
pub struct GbStats {
    pub pairs_processed: u64,
    pub additions: u64,
}

/// A Gröbner basis together with lineages and run statistics.
#[derive(Clone, Debug)]
pub struct GroebnerBasisResult {
    pub ring: Ring,
    pub elements: Vec<(Polynomial, Lineage)>,
    pub minimal: bool,
    pub reduced: bool,
    pub stats: GbStats,
}

impl GroebnerBasisResult {
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.elements.iter().map(|(p, _)| p.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Depth of the deepest lineage; 0 when only generators survived.
    pub fn longest_lineage(&self) -> u32 {
        self.elements.iter().map(|(_, l)| l.depth()).max().unwrap_or(0)
    }

    /// Largest lineage leaf count, the size-based length alternative.
    pub fn longest_lineage_leaves(&self) -> u64 {
        self.elements
            .iter()
            .map(|(_, l)| l.leaf_count())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
struct PendingPair {
    left: usize,
    right: usize,
    lcm_degree: u64,
    seq: u64,
}

/// Runs Buchberger's algorithm on the generators.
///
/// The output satisfies Buchberger's criterion (every S-polynomial of
/// output pairs reduces to zero against the output), contains the monic
/// forms of all input generators, and carries a lineage per element.
/// The run is deterministic for a fixed strategy.
pub fn buchberger(gens: &GeneratorSet, options: &BuchbergerOptions) -> Result<GroebnerBasisResult> {
    let ring = gens.ring.clone();
    let ord = &ring.order;
    let mut stats = GbStats::default();

    let mut basis: Vec<(Polynomial, Lineage)> = gens
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| (g.normalize(), Lineage::Leaf(i)))
        .collect();

    // A unit among the generators collapses the ideal immediately.
    if let Some((p, l)) = basis.iter().find(|(p, _)| p.is_constant()) {
        return Ok(unit_basis(ring, p.clone(), l.clone(), stats));
    }

    let mut queue: VecDeque<PendingPair> = VecDeque::new();
    let mut seq = 0u64;
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            queue.push_back(pending(&basis, i, j, &mut seq));
        }
    }

    while let Some(pair) = pop_pair(&mut queue, options.strategy) {
        stats.pairs_processed += 1;
        if let Some(cap) = options.max_pairs {
            if stats.pairs_processed > cap {
                return Err(Error::ComputationCap {
                    pairs: stats.pairs_processed,
                });
            }
        }
        let (f, fl) = &basis[pair.left];
        let (g, gl) = &basis[pair.right];
        if options.coprime_criterion {
            let (fm, gm) = (
                f.leading_monomial().unwrap(),
                g.leading_monomial().unwrap(),
            );
            if fm.lcm(gm) == fm.mul(gm) {
                continue;
            }
        }
        let s = s_polynomial(f, g, ord);
        stats.additions += 1;
        if s.is_zero() {
            continue;
        }
        let polys: Vec<Polynomial> = basis.iter().map(|(p, _)| p.clone()).collect();
        let div = divide(&s, &polys, ord);
        stats.additions += div.steps;
        if div.remainder.is_zero() {
            continue;
        }
        let lineage = Lineage::pair(fl.clone(), gl.clone());
        let reduced = div.remainder.normalize();
        if reduced.is_constant() {
            // A nonzero constant remainder means the ideal is the whole
            // ring; the basis collapses to {1}.
            return Ok(unit_basis(ring, reduced, lineage, stats));
        }
        basis.push((reduced, lineage));
        let t = basis.len() - 1;
        for i in 0..t {
            queue.push_back(pending(&basis, t, i, &mut seq));
        }
    }

    Ok(GroebnerBasisResult {
        ring,
        elements: basis,
        minimal: false,
        reduced: false,
        stats,
    })
}

fn unit_basis(
    ring: Ring,
    unit: Polynomial,
    lineage: Lineage,
    stats: GbStats,
) -> GroebnerBasisResult {
    GroebnerBasisResult {
        ring,
        elements: vec![(unit.normalize(), lineage)],
        minimal: true,
        reduced: true,
        stats,
    }
}

fn pending(basis: &[(Polynomial, Lineage)], left: usize, right: usize, seq: &mut u64) -> PendingPair {
    let lm = basis[left].0.leading_monomial().unwrap();
    let rm = basis[right].0.leading_monomial().unwrap();
    let p = PendingPair {
        left,
        right,
        lcm_degree: lm.lcm(rm).total_degree(),
        seq: *seq,
    };
    *seq += 1;
    p
}

fn pop_pair(queue: &mut VecDeque<PendingPair>, strategy: Strategy) -> Option<PendingPair> {
    match strategy {
        Strategy::FirstCome => queue.pop_front(),
        Strategy::Degree => {
            let best = queue
                .iter()
                .enumerate()
                .min_by_key(|(_, p)| (p.lcm_degree, p.seq))?
                .0;
            queue.remove(best)
        }
    }
}

/// Drops every element whose initial monomial is strictly divisible by (or
/// duplicates) another element's initial monomial. The survivors' initial
/// monomials are the unique minimal generators of the initial ideal.
pub fn minimalize(result: &GroebnerBasisResult) -> GroebnerBasisResult {
    let leads: Vec<_> = result
        .elements
        .iter()
        .map(|(p, _)| p.leading_monomial().unwrap().clone())
        .collect();
    let elements: Vec<(Polynomial, Lineage)> = result
        .elements
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            !leads.iter().enumerate().any(|(j, lj)| {
                j != *i && lj.divides(&leads[*i]) && (lj != &leads[*i] || j < *i)
            })
        })
        .map(|(_, e)| e.clone())
        .collect();
    GroebnerBasisResult {
        ring: result.ring.clone(),
        elements,
        minimal: true,
        reduced: result.reduced,
        stats: result.stats,
    }
}

/// Tail-reduces a minimal basis into THE reduced Gröbner basis of the
/// ideal: every element is replaced by its normal form against the others
/// and the result is sorted by initial monomial, so the output is identical
/// whatever strategy produced the input.
pub fn reduce(result: &GroebnerBasisResult) -> GroebnerBasisResult {
    assert!(result.minimal, "reduce expects a minimal basis");
    let polys: Vec<Polynomial> = result.elements.iter().map(|(p, _)| p.clone()).collect();
    let ord = &result.ring.order;
    let mut elements: Vec<(Polynomial, Lineage)> = Vec::with_capacity(polys.len());
    for (i, (_, lineage)) in result.elements.iter().enumerate() {
        let others: Vec<Polynomial> = polys
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let reduced = crate::poly::division::reduce_fully(&polys[i], &others, ord).normalize();
        elements.push((reduced, lineage.clone()));
    }
    elements.sort_by(|(a, _), (b, _)| {
        ord.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
    });
    GroebnerBasisResult {
        ring: result.ring.clone(),
        elements,
        minimal: true,
        reduced: true,
        stats: result.stats,
    }
}

/// Why a candidate set failed the Gröbner basis check.
#[derive(Clone, Debug)]
pub enum GbWitness {
    /// `S(candidate[i], candidate[j])` left this nonzero remainder.
    SPair {
        i: usize,
        j: usize,
        remainder: Polynomial,
    },
    /// Generator `index` left this nonzero remainder.
    Generator { index: usize, remainder: Polynomial },
}

impl fmt::Display for GbWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GbWitness::SPair { i, j, .. } => {
                write!(f, "S-pair ({i},{j}) does not reduce to zero")
            }
            GbWitness::Generator { index, .. } => {
                write!(f, "generator {index} does not reduce to zero")
            }
        }
    }
}

/// The definitive check: `candidate` is a Gröbner basis of the ideal
/// generated by `gens` iff every S-polynomial of candidate pairs reduces
/// to zero against the candidate and every generator does too. Returns the
/// first failing witness.
pub fn is_groebner_basis(
    candidate: &[Polynomial],
    gens: &GeneratorSet,
) -> std::result::Result<(), GbWitness> {
    assert!(!candidate.is_empty(), "empty candidate basis");
    let ord = &gens.ring.order;
    for i in 0..candidate.len() {
        for j in (i + 1)..candidate.len() {
            let s = s_polynomial(&candidate[i], &candidate[j], ord);
            let r = crate::poly::division::reduce_fully(&s, candidate, ord);
            if !r.is_zero() {
                return Err(GbWitness::SPair { i, j, remainder: r });
            }
        }
    }
    for (index, g) in gens.generators.iter().enumerate() {
        let r = crate::poly::division::reduce_fully(g, candidate, ord);
        if !r.is_zero() {
            return Err(GbWitness::Generator {
                index,
                remainder: r,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_polynomial;
    use crate::poly::{Monomial, Ring};

    fn gens3(sources: &[&str]) -> GeneratorSet {
        let ring = Ring::rational_grevlex(3);
        let polys = sources
            .iter()
            .map(|s| parse_polynomial(s, &ring).unwrap())
            .collect();
        GeneratorSet::new(ring, polys).unwrap()
    }

    fn gens4(sources: &[&str]) -> GeneratorSet {
        let ring = Ring::rational_grevlex(4);
        let polys = sources
            .iter()
            .map(|s| parse_polynomial(s, &ring).unwrap())
            .collect();
        GeneratorSet::new(ring, polys).unwrap()
    }

    #[test]
    fn worked_example_lineages() {
        // I = (x^2 - y, x^3 - z), grevlex, first-come: four tracked
        // elements with lineages 0, 1, (0,1), ((0,1),0). The third element
        // is stored in monic form x*y - z.
        let f = gens3(&["x1^2 - x2", "x1^3 - x3"]);
        let result = buchberger(&f, &BuchbergerOptions::default()).unwrap();
        assert_eq!(result.len(), 4);
        let ring = Ring::rational_grevlex(3);
        let expect = [
            ("x1^2 - x2", "0"),
            ("x1^3 - x3", "1"),
            ("x1*x2 - x3", "(0,1)"),
            ("x2^2 - x1*x3", "((0,1),0)"),
        ];
        for ((poly, lineage), (want_poly, want_lineage)) in result.elements.iter().zip(expect) {
            assert_eq!(poly, &parse_polynomial(want_poly, &ring).unwrap());
            assert_eq!(lineage.to_string(), want_lineage);
        }
        assert_eq!(result.longest_lineage(), 2);
        assert_eq!(minimalize(&result).len(), 3);
    }

    #[test]
    fn single_generator_is_its_own_basis() {
        let ring = Ring::rational_grevlex(1);
        let f = GeneratorSet::new(
            ring.clone(),
            vec![parse_polynomial("x1 - 1", &ring).unwrap()],
        )
        .unwrap();
        let result = buchberger(&f, &BuchbergerOptions::default()).unwrap();
        assert_eq!(result.len(), 1);
        assert_eq!(result.elements[0].1, Lineage::Leaf(0));
        assert_eq!(result.stats.pairs_processed, 0);
        assert_eq!(result.longest_lineage(), 0);
    }

    #[test]
    fn twisted_cubic_minimal_basis() {
        let f = gens4(&["x1*x3 - x2^2", "x2*x4 - x3^2", "x1*x4 - x2*x3"]);
        let result = buchberger(&f, &BuchbergerOptions::default()).unwrap();
        // Independent check: the output passes the S-pair criterion.
        assert!(is_groebner_basis(&result.polynomials(), &f).is_ok());
        let minimal = minimalize(&result);
        assert_eq!(minimal.len(), 3);
        // grevlex initial ideal of the twisted cubic: <x2^2, x2*x3, x3^2>.
        let mut leads: Vec<Monomial> = minimal
            .elements
            .iter()
            .map(|(p, _)| p.leading_monomial().unwrap().clone())
            .collect();
        leads.sort();
        assert_eq!(
            leads,
            vec![
                Monomial::new(vec![0, 1, 1, 0]),
                Monomial::new(vec![0, 2, 0, 0]),
                Monomial::new(vec![0, 0, 2, 0]),
            ]
            .into_iter()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect::<Vec<_>>()
        );
    }

    #[test]
    fn minimalize_idempotent_and_unit_dominates() {
        let f = gens3(&["x1^2 - x2", "x1^3 - x3"]);
        let result = buchberger(&f, &BuchbergerOptions::default()).unwrap();
        let min1 = minimalize(&result);
        let min2 = minimalize(&min1);
        assert_eq!(min1.len(), min2.len());
        for ((a, _), (b, _)) in min1.elements.iter().zip(&min2.elements) {
            assert_eq!(a, b);
        }

        // {1, f, g} minimalizes to {1}.
        let ring = Ring::rational_grevlex(3);
        let unit_set = GroebnerBasisResult {
            ring: ring.clone(),
            elements: vec![
                (parse_polynomial("1", &ring).unwrap(), Lineage::Leaf(0)),
                (parse_polynomial("x1^2 - x2", &ring).unwrap(), Lineage::Leaf(1)),
                (parse_polynomial("x2 - x3", &ring).unwrap(), Lineage::Leaf(2)),
            ],
            minimal: false,
            reduced: false,
            stats: GbStats::default(),
        };
        let min = minimalize(&unit_set);
        assert_eq!(min.len(), 1);
        assert!(min.elements[0].0.is_constant());
    }

    #[test]
    fn unit_ideal_short_circuits() {
        let f = gens3(&["x1", "x1 - 1"]);
        let result = buchberger(&f, &BuchbergerOptions::default()).unwrap();
        assert_eq!(result.len(), 1);
        assert!(result.elements[0].0.is_constant());
        assert!(is_groebner_basis(&result.polynomials(), &f).is_ok());
    }

    #[test]
    fn reduce_yields_unique_reduced_basis() {
        let f = gens3(&["x1^2 - x2", "x1^3 - x3"]);
        let first = reduce(&minimalize(
            &buchberger(&f, &BuchbergerOptions::with_strategy(Strategy::FirstCome)).unwrap(),
        ));
        let degree = reduce(&minimalize(
            &buchberger(&f, &BuchbergerOptions::with_strategy(Strategy::Degree)).unwrap(),
        ));
        let a: Vec<Polynomial> = first.polynomials();
        let b: Vec<Polynomial> = degree.polynomials();
        assert_eq!(a, b);
        // Already-reduced basis is unchanged.
        let again = reduce(&first);
        assert_eq!(first.polynomials(), again.polynomials());
    }

    #[test]
    fn reduce_clears_reducible_tails() {
        // {x1^2, x1^2 + x2} minimalizes against equal leads and then
        // reduces to {x1^2, x2}.
        let ring = Ring::rational_grevlex(3);
        let raw = GroebnerBasisResult {
            ring: ring.clone(),
            elements: vec![
                (parse_polynomial("x1^2", &ring).unwrap(), Lineage::Leaf(0)),
                (
                    parse_polynomial("x1^2 + x2", &ring).unwrap(),
                    Lineage::Leaf(1),
                ),
            ],
            minimal: false,
            reduced: false,
            stats: GbStats::default(),
        };
        // Equal leading monomials: minimalize keeps the first.
        let min = minimalize(&raw);
        assert_eq!(min.len(), 1);
    }

    #[test]
    fn criterion_rejects_non_basis() {
        let f = gens3(&["x1^2 - x2", "x1^3 - x3"]);
        let err = is_groebner_basis(
            &f.generators.iter().map(|g| g.normalize()).collect::<Vec<_>>(),
            &f,
        )
        .unwrap_err();
        match err {
            GbWitness::SPair { i, j, ref remainder } => {
                assert_eq!((i, j), (0, 1));
                assert!(!remainder.is_zero());
            }
            other => panic!("expected an S-pair witness, got {other}"),
        }
        // The true basis passes.
        let ring = Ring::rational_grevlex(3);
        let basis: Vec<Polynomial> = ["x1^2 - x2", "x1*x2 - x3", "x2^2 - x1*x3"]
            .iter()
            .map(|s| parse_polynomial(s, &ring).unwrap())
            .collect();
        assert!(is_groebner_basis(&basis, &f).is_ok());
    }

    #[test]
    fn lineage_shapes() {
        let balanced = Lineage::pair(
            Lineage::pair(Lineage::Leaf(0), Lineage::Leaf(1)),
            Lineage::pair(Lineage::Leaf(2), Lineage::Leaf(3)),
        );
        assert_eq!(balanced.depth(), 2);
        assert_eq!(balanced.leaf_count(), 4);
        assert_eq!(balanced.to_string(), "((0,1),(2,3))");
    }

    #[test]
    fn strategies_share_minimal_initial_monomials() {
        let f = gens3(&["x1^2 - x2", "x1^3 - x3"]);
        let collect = |strategy| {
            let r = minimalize(
                &buchberger(&f, &BuchbergerOptions::with_strategy(strategy)).unwrap(),
            );
            let mut leads: Vec<Monomial> = r
                .elements
                .iter()
                .map(|(p, _)| p.leading_monomial().unwrap().clone())
                .collect();
            leads.sort();
            leads
        };
        assert_eq!(collect(Strategy::FirstCome), collect(Strategy::Degree));
    }

    #[test]
    fn pair_cap_is_enforced() {
        let f = gens3(&["x1^2 - x2", "x1^3 - x3"]);
        let opts = BuchbergerOptions {
            max_pairs: Some(1),
            ..Default::default()
        };
        assert!(matches!(
            buchberger(&f, &opts),
            Err(Error::ComputationCap { .. })
        ));
    }
}
