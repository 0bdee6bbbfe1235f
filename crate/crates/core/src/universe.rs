//! Construction, counting, and pruning of sampling universes.
//!
//! Two constructions ship: a toric enumeration universe, whose membership
//! filter A·u = A·v is a pure linear test and therefore honest (no Gröbner
//! computation involved), and an oracle universe that runs Buchberger up
//! front and pads the reduced basis with random ideal elements — openly
//! circular, used to validate the sampling machinery end to end.

use std::io::BufRead;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::Zero;
use rand::Rng;

use crate::buchberger::{buchberger, minimalize, reduce, BuchbergerOptions, GroebnerBasisResult, Strategy};
use crate::error::{Error, Result};
use crate::gb_violator::GroebnerViolatorSpace;
use crate::poly::division::reduce_fully;
use crate::poly::{count_monomials, Coeff, CountMode, GeneratorSet, Monomial, Polynomial, Ring};

/// An integer matrix defining a toric (lattice) ideal: column i is the
/// exponent vector of variable i's parameterization.
#[derive(Clone, Debug)]
pub struct ToricMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl ToricMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self> {
        if rows == 0 || cols < 2 {
            return Err(Error::Config(
                "toric matrix needs at least one row and two columns".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::Config(format!(
                "expected {} entries, found {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(ToricMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    /// Variables whose parameterization column is identically zero.
    pub fn zero_columns(&self) -> Vec<usize> {
        (0..self.cols)
            .filter(|&c| (0..self.rows).all(|r| self.get(r, c) == 0))
            .collect()
    }

    /// Image A·u of an exponent vector.
    pub fn image(&self, m: &Monomial) -> Vec<i128> {
        assert_eq!(m.arity(), self.cols, "monomial arity mismatch");
        (0..self.rows)
            .map(|r| {
                m.exponents()
                    .iter()
                    .enumerate()
                    .map(|(c, &e)| self.get(r, c) as i128 * e as i128)
                    .sum()
            })
            .collect()
    }

    /// Reads `rows cols` then row-major whitespace-separated integers.
    pub fn read_from(r: impl BufRead) -> Result<Self> {
        let mut numbers: Vec<i64> = Vec::new();
        for line in r.lines() {
            let line = line?;
            for tok in line.split_whitespace() {
                numbers.push(
                    tok.parse()
                        .map_err(|_| Error::Parse(format!("bad matrix entry `{tok}`")))?,
                );
            }
        }
        if numbers.len() < 2 {
            return Err(Error::Parse("matrix file is missing its header".into()));
        }
        let rows = usize::try_from(numbers[0])
            .map_err(|_| Error::Parse("negative row count".into()))?;
        let cols = usize::try_from(numbers[1])
            .map_err(|_| Error::Parse("negative column count".into()))?;
        ToricMatrix::new(rows, cols, numbers[2..].to_vec())
    }
}

/// All monomials in `n` variables of total degree at most `d`, in a
/// deterministic (lexicographic exponent) order.
pub fn enumerate_monomials(n: usize, d: u64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    fn rec(exps: &mut Vec<u32>, pos: usize, left: u64, out: &mut Vec<Monomial>) {
        if pos == exps.len() {
            out.push(Monomial::new(exps.clone()));
            return;
        }
        for e in 0..=left {
            exps[pos] = e as u32;
            rec(exps, pos + 1, left - e, out);
        }
        exps[pos] = 0;
    }
    rec(&mut exps, 0, d, &mut out);
    out
}

/// Enumerates every monic binomial x^u − x^v with both degrees at most
/// `d` and equal images A·u = A·v. Pairs with equal images are exactly the
/// degree-bounded binomials of the lattice ideal of A, so the universe is
/// guaranteed to sit inside the ideal.
pub fn toric_universe(a: &ToricMatrix, d: u64, ring: &Ring) -> Result<GroebnerViolatorSpace> {
    if ring.n != a.cols() {
        return Err(Error::Config(format!(
            "ring has {} variables but the matrix has {} columns",
            ring.n,
            a.cols()
        )));
    }
    if d == 0 {
        return Err(Error::Config("degree bound must be at least 1".into()));
    }
    let monomials = enumerate_monomials(ring.n, d);
    let mut groups: std::collections::BTreeMap<Vec<i128>, Vec<&Monomial>> =
        std::collections::BTreeMap::new();
    for m in &monomials {
        groups.entry(a.image(m)).or_default().push(m);
    }
    let one = Coeff::one(ring.field);
    let minus_one = one.neg();
    let mut polys = Vec::new();
    for group in groups.values() {
        for i in 0..group.len() {
            for j in (i + 1)..group.len() {
                let (u, v) = (group[i], group[j]);
                let (big, small) = match ring.order.compare(u, v) {
                    std::cmp::Ordering::Less => (v, u),
                    _ => (u, v),
                };
                polys.push(Polynomial::from_terms(
                    vec![(one.clone(), big.clone()), (minus_one.clone(), small.clone())],
                    &ring.order,
                    ring.n,
                ));
            }
        }
    }
    GroebnerViolatorSpace::new(ring.clone(), polys)
}

/// An oracle universe plus the reduced basis it was grown around.
#[derive(Clone, Debug)]
pub struct OracleUniverse {
    pub space: GroebnerViolatorSpace,
    pub reduced_basis: GroebnerBasisResult,
}

/// Validation universe: the reduced Gröbner basis of the input, any
/// nonzero generator remainders, and `padding` extra ideal elements of
/// the shape m·g + m'·g' for random monomials m, m' and basis elements
/// g, g'. By construction the universe lies inside the ideal and contains
/// a minimal Gröbner basis.
pub fn oracle_universe<R: Rng>(
    gens: &GeneratorSet,
    padding: usize,
    rng: &mut R,
) -> Result<OracleUniverse> {
    let ring = gens.ring.clone();
    let ord = &ring.order;
    let reduced_basis = reduce(&minimalize(&buchberger(
        gens,
        &BuchbergerOptions {
            strategy: Strategy::Degree,
            coprime_criterion: false,
            max_pairs: Some(500_000),
        },
    )?));
    let gb: Vec<Polynomial> = reduced_basis.polynomials();
    let mut members: std::collections::HashSet<Polynomial> = gb.iter().cloned().collect();
    let mut polys: Vec<Polynomial> = gb.clone();
    // Generators always reduce to zero against the reduced basis; the
    // guard keeps the universe well-formed even if that ever changed.
    for g in &gens.generators {
        let r = reduce_fully(g, &gb, ord);
        if !r.is_zero() {
            let monic = r.normalize();
            if members.insert(monic.clone()) {
                polys.push(monic);
            }
        }
    }
    let mut degree_bound: u64 = 2;
    let mut rejects_in_a_row = 0u32;
    let mut accepted = 0usize;
    let mut attempts = 0u64;
    let attempt_cap = 200 * padding as u64 + 1_000;
    while accepted < padding && attempts < attempt_cap {
        attempts += 1;
        let g = &gb[rng.gen_range(0..gb.len())];
        let g2 = &gb[rng.gen_range(0..gb.len())];
        let m = random_monomial(ring.n, degree_bound, rng);
        let m2 = random_monomial(ring.n, degree_bound, rng);
        let candidate = g.mul_monomial(&m).add(&g2.mul_monomial(&m2), ord);
        if candidate.is_zero() {
            rejects_in_a_row += 1;
        } else {
            let monic = candidate.normalize();
            if members.insert(monic.clone()) {
                polys.push(monic);
                accepted += 1;
                rejects_in_a_row = 0;
            } else {
                rejects_in_a_row += 1;
            }
        }
        // Widen the monomial pool when duplicates saturate the current one.
        if rejects_in_a_row >= 30 {
            degree_bound += 1;
            rejects_in_a_row = 0;
        }
    }
    Ok(OracleUniverse {
        space: GroebnerViolatorSpace::new(ring, polys)?,
        reduced_basis,
    })
}

/// Uniform random monomial: degree uniform on 0..=bound, exponent vector
/// uniform over the compositions of that degree.
pub fn random_monomial<R: Rng>(n: usize, bound: u64, rng: &mut R) -> Monomial {
    let degree = rng.gen_range(0..=bound);
    random_monomial_exact(n, degree, rng)
}

/// Uniform over exponent vectors of total degree exactly `degree`
/// (stars and bars: n-1 dividers among degree+n-1 slots).
pub fn random_monomial_exact<R: Rng>(n: usize, degree: u64, rng: &mut R) -> Monomial {
    if n == 1 {
        return Monomial::new(vec![degree as u32]);
    }
    let slots = (degree as usize) + n - 1;
    let mut bars: Vec<usize> = rand::seq::index::sample(rng, slots, n - 1).into_vec();
    bars.sort_unstable();
    let mut exps = Vec::with_capacity(n);
    let mut prev: i64 = -1;
    for &b in &bars {
        exps.push((b as i64 - prev - 1) as u32);
        prev = b as i64;
    }
    exps.push((slots as i64 - prev - 1) as u32);
    Monomial::new(exps)
}

/// Worst-case universe size accounting for a degree-d construction.
#[derive(Clone, Debug)]
pub struct SizeBoundReport {
    /// Monomials of degree at most d in n variables.
    pub monomial_count: BigUint,
    /// Binomial-pair universe bound: C(count, 2), or the per-degree sum
    /// of pair counts in the homogeneous case.
    pub pair_bound: BigUint,
    /// Terms available per polynomial over a finite field of size l:
    /// l · C(d+n, n). None over an infinite field.
    pub term_bound: Option<BigUint>,
    /// The exponent gamma of the full-subset bound 2^gamma. Report-only:
    /// such a universe is never materialized.
    pub subset_exponent: Option<BigUint>,
    pub homogeneous: bool,
}

/// Computes the worst-case counts for universes bounded by degree `d` in
/// `n` variables, over a field of `field_size` elements (None = infinite).
pub fn universe_size_bound(
    n: u64,
    d: u64,
    field_size: Option<u64>,
    homogeneous: bool,
) -> SizeBoundReport {
    let monomial_count = count_monomials(n, d, CountMode::UpToDegree);
    let pair_bound = if homogeneous {
        let mut total = BigUint::zero();
        for e in 0..=d {
            let c = count_monomials(n, e, CountMode::ExactDegree);
            total += binomial(c, BigUint::from(2u32));
        }
        total
    } else {
        binomial(monomial_count.clone(), BigUint::from(2u32))
    };
    let term_bound = field_size.map(|l| BigUint::from(l) * &monomial_count);
    SizeBoundReport {
        monomial_count,
        pair_bound,
        subset_exponent: term_bound.clone(),
        term_bound,
        homogeneous,
    }
}

/// Filters a universe by term count and total degree. Over-pruning can
/// remove every representative of some minimal initial monomial and
/// destroy the basis-containment guarantee; downstream verification is
/// what catches that.
pub fn prune_universe(
    space: &GroebnerViolatorSpace,
    max_terms: Option<usize>,
    degree_cap: Option<u64>,
) -> Result<GroebnerViolatorSpace> {
    let kept: Vec<Polynomial> = space
        .elements()
        .iter()
        .filter(|p| max_terms.is_none_or(|t| p.term_count() <= t))
        .filter(|p| degree_cap.is_none_or(|d| p.total_degree().unwrap_or(0) <= d))
        .cloned()
        .collect();
    GroebnerViolatorSpace::new(space.ring().clone(), kept)
}
