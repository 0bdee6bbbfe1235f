//! Generic violator spaces and Clarkson's two-stage sampling algorithms.
//!
//! A violator space is a finite universe together with a primitive
//! predicate deciding whether an element violates a subset. The sampler
//! finds a basis (a minimal subset with no violators left) using biased
//! random sampling, touching the primitive far fewer times than the
//! brute-force subset scan.

pub mod toy;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// A finite universe indexed 0..universe_size with a violation primitive.
///
/// Implementations must satisfy the two violator axioms on every subset:
/// consistency (no member of a set violates it) and locality (if no member
/// of `G` violates `F ⊆ G`, then `F` and `G` have the same violators).
pub trait ViolatorSpace {
    fn universe_size(&self) -> usize;

    /// The raw primitive: does element `h` violate the set `set`?
    /// `set` is sorted ascending.
    fn is_violator(&self, h: usize, set: &[usize]) -> bool;

    /// An ordering of `subset` such that scanning it once, keeping each
    /// element that violates the kept prefix, yields a basis of `subset`.
    /// Spaces without such an ordering return `None` and the sampler falls
    /// back to exhaustive subset search.
    fn greedy_basis_order(&self, subset: &[usize]) -> Option<Vec<usize>> {
        let _ = subset;
        None
    }
}

/// Per-element sampling weights. Multiplicities start at 1 and only ever
/// double, so they are kept as unbounded integers: the bias is exact and
/// can never silently overflow.
#[derive(Clone, Debug)]
pub struct MultiplicityMap {
    weights: Vec<BigUint>,
}

impl MultiplicityMap {
    pub fn new(size: usize) -> Self {
        MultiplicityMap {
            weights: vec![BigUint::one(); size],
        }
    }

    pub fn get(&self, h: usize) -> &BigUint {
        &self.weights[h]
    }

    pub fn double(&mut self, h: usize) {
        self.weights[h] = &self.weights[h] * 2u32;
    }

    /// Total weight of a set of elements.
    pub fn total(&self, set: &[usize]) -> BigUint {
        set.iter().map(|&h| &self.weights[h]).sum()
    }

    pub fn reset(&mut self) {
        for w in &mut self.weights {
            *w = BigUint::one();
        }
    }
}

/// The outcome of one sampling run.
#[derive(Clone, Debug)]
pub struct BasisResult {
    pub basis: Vec<usize>,
    pub primitive_queries: u64,
    pub rounds: u64,
    pub seed: u64,
}

/// JSON-facing statistics for a [`BasisResult`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SampleStats {
    pub basis_size: usize,
    pub primitive_queries: u64,
    pub rounds: u64,
    pub seed: u64,
}

impl BasisResult {
    pub fn stats(&self) -> SampleStats {
        SampleStats {
            basis_size: self.basis.len(),
            primitive_queries: self.primitive_queries,
            rounds: self.rounds,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SamplerConfig {
    /// Hard bound on sampling rounds; exceeding it aborts the run instead
    /// of looping forever on a wrong dimension estimate or broken space.
    pub round_cap: u64,
    /// Use the space's greedy basis ordering when it provides one.
    pub prefer_greedy: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            round_cap: 10_000,
            prefer_greedy: true,
        }
    }
}

/// Clarkson sampling engine over one violator space.
///
/// Multiplicities persist across calls so repeated runs against the same
/// universe keep their learned bias; `reset_multiplicities` clears them.
pub struct Sampler<'a, S: ViolatorSpace> {
    space: &'a S,
    pub multiplicities: MultiplicityMap,
    queries: u64,
    rounds: u64,
    config: SamplerConfig,
}

impl<'a, S: ViolatorSpace> Sampler<'a, S> {
    pub fn new(space: &'a S) -> Self {
        Self::with_config(space, SamplerConfig::default())
    }

    pub fn with_config(space: &'a S, config: SamplerConfig) -> Self {
        Sampler {
            multiplicities: MultiplicityMap::new(space.universe_size()),
            space,
            queries: 0,
            rounds: 0,
            config,
        }
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn reset_multiplicities(&mut self) {
        self.multiplicities.reset();
    }

    /// All universe indices, the natural top-level subset.
    pub fn universe(&self) -> Vec<usize> {
        (0..self.space.universe_size()).collect()
    }

    /// Counted primitive query. `h` must not be a member of `set`.
    pub fn violates(&mut self, h: usize, set: &[usize]) -> Result<bool> {
        if set.binary_search(&h).is_ok() {
            return Err(Error::ElementInSet(h));
        }
        Ok(self.query(h, set))
    }

    fn query(&mut self, h: usize, set: &[usize]) -> bool {
        self.queries += 1;
        self.space.is_violator(h, set)
    }

    /// The violators of `c` within `g`: every element of `g \ c` that the
    /// primitive reports as violating `c`. Exactly `|g \ c|` queries.
    pub fn violator_set(&mut self, g: &[usize], c: &[usize]) -> Vec<usize> {
        g.iter()
            .copied()
            .filter(|h| c.binary_search(h).is_err())
            .filter(|&h| self.query(h, c))
            .collect()
    }

    /// Exhaustive basis search: subsets of `g` in order of increasing size
    /// (ties broken lexicographically by index) until one has no violators
    /// in `g`. Worst case returns `g` itself. Only viable for small `g`.
    pub fn brute_force_basis(&mut self, g: &[usize]) -> Vec<usize> {
        for size in 0..=g.len() {
            let mut found: Option<Vec<usize>> = None;
            for_each_combination(g.len(), size, &mut |picked| {
                if found.is_some() {
                    return;
                }
                let candidate: Vec<usize> = picked.iter().map(|&i| g[i]).collect();
                if self.violator_set(g, &candidate).is_empty() {
                    found = Some(candidate);
                }
            });
            if let Some(basis) = found {
                return basis;
            }
        }
        g.to_vec()
    }

    /// Inner basis routine: greedy filtering when the space supports it,
    /// exhaustive search otherwise.
    fn inner_basis(&mut self, g: &[usize]) -> Vec<usize> {
        if self.config.prefer_greedy {
            if let Some(ordered) = self.space.greedy_basis_order(g) {
                let mut basis: Vec<usize> = Vec::new();
                for h in ordered {
                    if self.query(h, &basis) {
                        let pos = basis.binary_search(&h).unwrap_err();
                        basis.insert(pos, h);
                    }
                }
                return basis;
            }
        }
        self.brute_force_basis(g)
    }

    fn bump_round(&mut self) -> Result<()> {
        self.rounds += 1;
        if self.rounds > self.config.round_cap {
            Err(Error::RoundCapExceeded {
                cap: self.config.round_cap,
            })
        } else {
            Ok(())
        }
    }

    /// Clarkson's second algorithm. Samples 6δ² elements biased by the
    /// multiplicities, computes the sample's basis, and doubles the weight
    /// of every violator whenever the violators are light enough
    /// (3δ·𝔪(V) ≤ 𝔪(G)), until no violators remain.
    pub fn basis2<R: Rng>(&mut self, g: &[usize], delta: usize, rng: &mut R) -> Result<Vec<usize>> {
        let sample_size = 6usize.saturating_mul(delta.saturating_mul(delta));
        if g.len() <= sample_size {
            return Ok(self.inner_basis(g));
        }
        loop {
            self.bump_round()?;
            let r = self.weighted_sample(g, sample_size, rng);
            let c = self.inner_basis(&r);
            let v = self.violator_set(g, &c);
            if v.is_empty() {
                return Ok(c);
            }
            let mv = self.multiplicities.total(&v);
            let mg = self.multiplicities.total(g);
            if mv * (3u64 * delta as u64) <= mg {
                for &h in &v {
                    self.multiplicities.double(h);
                }
            }
        }
    }

    /// Clarkson's first algorithm. Repeatedly samples ⌊δ√|G|⌋ elements
    /// uniformly from outside the mandatory set `W`, solves the small
    /// subproblem with [`Sampler::basis2`], and when the violators are few
    /// (≤ 2√|G|) adds them to `W`, until no violators remain.
    pub fn clarkson1<R: Rng>(
        &mut self,
        g: &[usize],
        delta: usize,
        rng: &mut R,
    ) -> Result<Vec<usize>> {
        if g.len() <= 9usize.saturating_mul(delta.saturating_mul(delta)) {
            return self.basis2(g, delta, rng);
        }
        let r_size = ((delta as f64) * (g.len() as f64).sqrt()).floor() as usize;
        let mut w: Vec<usize> = Vec::new();
        loop {
            self.bump_round()?;
            let pool: Vec<usize> = g
                .iter()
                .copied()
                .filter(|h| w.binary_search(h).is_err())
                .collect();
            // If fewer than ⌊δ√|G|⌋ elements remain outside W, take them all.
            let r = if pool.len() <= r_size {
                pool
            } else {
                uniform_sample(&pool, r_size, rng)
            };
            let wr = sorted_union(&w, &r);
            let c = self.basis2(&wr, delta, rng)?;
            let v = self.violator_set(g, &c);
            if v.is_empty() {
                return Ok(c);
            }
            if (v.len() as f64) <= 2.0 * (g.len() as f64).sqrt() {
                w = sorted_union(&w, &v);
            }
        }
    }

    /// Runs Clarkson's first algorithm over the whole universe with a
    /// fresh seeded generator and returns the result with statistics.
    pub fn run(&mut self, delta: usize, seed: u64) -> Result<BasisResult> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = self.universe();
        let basis = self.clarkson1(&g, delta, &mut rng)?;
        Ok(BasisResult {
            basis,
            primitive_queries: self.queries,
            rounds: self.rounds,
            seed,
        })
    }

    /// Draws `count` distinct elements of `g`, each draw proportional to
    /// the remaining multiplicities. Result is sorted.
    fn weighted_sample<R: Rng>(&self, g: &[usize], count: usize, rng: &mut R) -> Vec<usize> {
        let mut remaining: Vec<usize> = g.to_vec();
        let mut weights: Vec<BigUint> = remaining
            .iter()
            .map(|&h| self.multiplicities.get(h).clone())
            .collect();
        let mut total: BigUint = weights.iter().sum();
        let mut picked = Vec::with_capacity(count.min(remaining.len()));
        while picked.len() < count && !remaining.is_empty() {
            let target = rng.gen_biguint_below(&total);
            let mut acc = BigUint::zero();
            let mut chosen = remaining.len() - 1;
            for (i, w) in weights.iter().enumerate() {
                acc += w;
                if target < acc {
                    chosen = i;
                    break;
                }
            }
            picked.push(remaining[chosen]);
            total -= &weights[chosen];
            remaining.swap_remove(chosen);
            weights.swap_remove(chosen);
        }
        picked.sort_unstable();
        picked
    }
}

/// Uniform sample of `count` distinct elements; result sorted.
fn uniform_sample<R: Rng>(pool: &[usize], count: usize, rng: &mut R) -> Vec<usize> {
    let mut picked: Vec<usize> = rand::seq::index::sample(rng, pool.len(), count)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    picked.sort_unstable();
    picked
}

/// Union of two sorted index sets.
pub(crate) fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Visits all k-subsets of 0..n in lexicographic order.
fn for_each_combination(n: usize, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut picked: Vec<usize> = (0..k).collect();
    loop {
        visit(&picked);
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if picked[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        picked[i] += 1;
        for j in i + 1..k {
            picked[j] = picked[j - 1] + 1;
        }
    }
}

/// Which violator axiom a trial broke.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AxiomKind {
    /// Some member of a set violated the set itself.
    Consistency,
    /// F ⊆ G with no member of G violating F, yet vi(F) ≠ vi(G).
    Locality,
    /// vi(G) ⊄ vi(F) for some F ⊆ G.
    Antitone,
}

#[derive(Clone, Debug)]
pub struct AxiomFailure {
    pub kind: AxiomKind,
    pub outer: Vec<usize>,
    pub inner: Vec<usize>,
    pub witness: usize,
    pub trial: u64,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub trials: u64,
    pub failure: Option<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Full violator set over the whole universe (uncounted raw predicate).
pub fn full_violator_set<S: ViolatorSpace>(space: &S, set: &[usize]) -> Vec<usize> {
    (0..space.universe_size())
        .filter(|&h| space.is_violator(h, set))
        .collect()
}

/// Randomized check of the violator axioms: samples nested subsets
/// F ⊆ G of the universe and asserts consistency, the antitone property
/// vi(G) ⊆ vi(F), and locality whenever its premise G ∩ vi(F) = ∅ holds.
/// Stops at the first violating pair.
pub fn check_axioms<S: ViolatorSpace, R: Rng>(space: &S, trials: u64, rng: &mut R) -> AxiomReport {
    let n = space.universe_size();
    for trial in 0..trials {
        let g: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        let f: Vec<usize> = g.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let vi_g = full_violator_set(space, &g);
        let vi_f = full_violator_set(space, &f);
        // Consistency on both sets.
        for (set, vi) in [(&g, &vi_g), (&f, &vi_f)] {
            if let Some(&h) = set.iter().find(|h| vi.binary_search(h).is_ok()) {
                return AxiomReport {
                    trials: trial + 1,
                    failure: Some(AxiomFailure {
                        kind: AxiomKind::Consistency,
                        outer: set.clone(),
                        inner: set.clone(),
                        witness: h,
                        trial,
                    }),
                };
            }
        }
        // Antitone: F ⊆ G implies vi(G) ⊆ vi(F).
        if let Some(&h) = vi_g.iter().find(|h| vi_f.binary_search(h).is_err()) {
            return AxiomReport {
                trials: trial + 1,
                failure: Some(AxiomFailure {
                    kind: AxiomKind::Antitone,
                    outer: g,
                    inner: f,
                    witness: h,
                    trial,
                }),
            };
        }
        // Locality under its premise.
        if g.iter().all(|h| vi_f.binary_search(h).is_err()) && vi_f != vi_g {
            let witness = vi_f
                .iter()
                .find(|h| vi_g.binary_search(h).is_err())
                .copied()
                .unwrap_or(0);
            return AxiomReport {
                trials: trial + 1,
                failure: Some(AxiomFailure {
                    kind: AxiomKind::Locality,
                    outer: g,
                    inner: f,
                    witness,
                    trial,
                }),
            };
        }
    }
    AxiomReport {
        trials,
        failure: None,
    }
}
