//! End-to-end driver: predict (k, m), build the universe, Clarkson-sample
//! a candidate basis, verify it, and escalate on failure until a verified
//! minimal Gröbner basis comes out or the budget is exhausted.

use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::buchberger::{is_groebner_basis, GbWitness};
use crate::error::{Error, Result};
use crate::gb_violator::GroebnerViolatorSpace;
use crate::poly::parse::{format_polynomial, parse_polynomial, parse_ring_header};
use crate::poly::{FieldKind, GeneratorSet, MonomialOrder, OrderKind, Polynomial};
use crate::predictor::Predictor;
use crate::universe::{oracle_universe, toric_universe, ToricMatrix};
use crate::violator::{Sampler, SamplerConfig};

/// Where the sampling universe comes from.
#[derive(Clone, Debug)]
pub enum UniverseSource {
    /// Enumerate degree-bounded binomials of the lattice ideal of `matrix`.
    /// The degree is the explicit override when given, otherwise the
    /// pipeline's current m.
    Toric {
        matrix: ToricMatrix,
        degree: Option<u64>,
    },
    /// Run the Buchberger oracle and pad its reduced basis.
    OraclePadding { padding: usize },
    /// A fixed, caller-supplied universe (e.g. loaded from a file). Cannot
    /// be improved by degree escalation.
    Fixed { space: GroebnerViolatorSpace },
}

/// Tunables for one pipeline run.
#[derive(Clone, Debug)]
pub struct PipelineParams {
    pub seed: u64,
    /// Multiplier applied to the predicted k before sampling.
    pub safety: f64,
    pub max_escalations: u32,
    /// Added to the degree fallback when the predictor has no m estimate.
    pub degree_slack: u64,
    pub round_cap: u64,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            seed: 0,
            safety: 1.5,
            max_escalations: 8,
            degree_slack: 0,
            round_cap: 10_000,
        }
    }
}

/// Machine-readable outcome of a verified run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub basis: Vec<String>,
    pub initial_monomials: Vec<String>,
    pub k_used: u64,
    pub m_used: u64,
    pub universe_size: usize,
    pub primitive_queries: u64,
    pub rounds: u64,
    pub escalations: u32,
    pub verified: bool,
    pub seed: u64,
    pub wall_ms: u64,
    /// Exact dimension when an oracle universe computed it.
    pub delta_actual: Option<u64>,
    pub safety_factor: f64,
    pub multiplicity_policy: String,
}

/// Three-part verdict on a candidate basis.
#[derive(Clone, Debug)]
pub struct Verification {
    /// (a) no element of the universe violates the candidate.
    pub violator_free: bool,
    /// (b) Buchberger's criterion plus generator membership.
    pub groebner: std::result::Result<(), GbWitness>,
    /// (c) pairwise non-divisibility of initial monomials; a witness pair
    /// of indices when it fails.
    pub minimality_witness: Option<(usize, usize)>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.violator_free && self.groebner.is_ok() && self.minimality_witness.is_none()
    }
}

/// Uncounted verification of a candidate against universe and input.
/// A violator-free candidate over an inadequate universe need not generate
/// the input ideal, so the full S-pair criterion backs the primitive check.
pub fn verify(
    space: &GroebnerViolatorSpace,
    basis_indices: &[usize],
    gens: &GeneratorSet,
) -> Verification {
    let violator_free = (0..space.len())
        .filter(|h| basis_indices.binary_search(h).is_err())
        .all(|h| !space.gb_violates(h, basis_indices));
    let polys: Vec<Polynomial> = basis_indices
        .iter()
        .map(|&i| space.element(i).clone())
        .collect();
    Verification {
        violator_free,
        groebner: is_groebner_basis(&polys, gens),
        minimality_witness: minimality_witness(&polys),
    }
}

/// First pair (i, j) with init(p_i) dividing init(p_j), if any.
pub fn minimality_witness(polys: &[Polynomial]) -> Option<(usize, usize)> {
    for i in 0..polys.len() {
        for j in 0..polys.len() {
            if i == j {
                continue;
            }
            let (li, lj) = (
                polys[i].leading_monomial().unwrap(),
                polys[j].leading_monomial().unwrap(),
            );
            if li.divides(lj) {
                return Some((i, j));
            }
        }
    }
    None
}

enum FailureKind {
    /// Round cap, oversized basis: resampling with a larger k can fix it.
    SampleTooSmall(String),
    /// The candidate is not a basis of the input ideal: the universe lacks
    /// a Gröbner basis and must be rebuilt at a higher degree.
    UniverseInadequate(String),
}

/// Runs the full prediction → universe → sample → check → escalate loop.
///
/// Escalation policy: failures attributable to the dimension estimate
/// double k (cheap, the universe and its sampling weights survive);
/// failures showing the universe lacks a basis raise m by one and rebuild
/// it (multiplicities reset). Emitted reports are always verified; every
/// other outcome is an error carrying the last diagnosis.
pub fn run_pipeline(
    gens: &GeneratorSet,
    predictor: &Predictor,
    universe: &UniverseSource,
    params: &PipelineParams,
) -> Result<RunReport> {
    let start = Instant::now();
    let prediction = predictor.predict(gens, params.degree_slack)?;
    let mut k = apply_safety(prediction.k, params.safety);
    let mut m = prediction.m.max(1);
    let mut escalations = 0u32;
    let mut carried_queries = 0u64;
    let mut carried_rounds = 0u64;
    let mut delta_actual: Option<u64> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    'universe: loop {
        let space = match build_universe(gens, universe, m, &mut rng) {
            Ok((space, delta)) => {
                if let Some(d) = delta {
                    delta_actual = Some(d);
                }
                space
            }
            Err(e) => return Err(e),
        };
        let mut sampler = Sampler::with_config(
            &space,
            SamplerConfig {
                round_cap: params.round_cap,
                prefer_greedy: true,
            },
        );
        loop {
            let all: Vec<usize> = (0..space.len()).collect();
            let attempt = sampler.clarkson1(&all, k as usize, &mut rng);
            let failure = match attempt {
                Err(Error::RoundCapExceeded { cap }) => FailureKind::SampleTooSmall(format!(
                    "sampling exceeded the {cap}-round cap at k={k}"
                )),
                Err(e) => return Err(e),
                Ok(candidate) => {
                    let violator_free = sampler.violator_set(&all, &candidate).is_empty();
                    let polys: Vec<Polynomial> =
                        candidate.iter().map(|&i| space.element(i).clone()).collect();
                    let groebner = if polys.is_empty() {
                        Err(GbWitness::Generator {
                            index: 0,
                            remainder: gens.generators[0].clone(),
                        })
                    } else {
                        is_groebner_basis(&polys, gens)
                    };
                    let minimal = minimality_witness(&polys);
                    // The sampling statistics are only trustworthy under
                    // the k >= delta hypothesis; a basis larger than k is
                    // direct evidence against it, so the run is retried at
                    // a larger k even though the candidate itself verified.
                    let within_k = candidate.len() as u64 <= k;
                    if violator_free && groebner.is_ok() && minimal.is_none() && within_k {
                        let wall_ms = start.elapsed().as_millis() as u64;
                        return Ok(report(
                            &space,
                            &candidate,
                            k,
                            m,
                            escalations,
                            carried_queries + sampler.queries(),
                            carried_rounds + sampler.rounds(),
                            params,
                            delta_actual,
                            wall_ms,
                        ));
                    }
                    if let Err(witness) = &groebner {
                        let shown: Vec<String> =
                            polys.iter().take(8).map(format_polynomial).collect();
                        FailureKind::UniverseInadequate(format!(
                            "candidate {{{}}}{} is not a basis of the input ideal: {witness}",
                            shown.join(", "),
                            if polys.len() > 8 { ", ..." } else { "" },
                        ))
                    } else if !within_k {
                        FailureKind::SampleTooSmall(format!(
                            "basis has {} elements, above the predicted k={k}",
                            candidate.len()
                        ))
                    } else {
                        FailureKind::SampleTooSmall(format!(
                            "violator-free={violator_free}, minimal={}",
                            minimal.is_none()
                        ))
                    }
                }
            };
            escalations += 1;
            if escalations > params.max_escalations {
                let reason = match failure {
                    FailureKind::SampleTooSmall(r) | FailureKind::UniverseInadequate(r) => r,
                };
                return Err(Error::EscalationExhausted {
                    escalations: escalations - 1,
                    reason,
                });
            }
            match failure {
                FailureKind::SampleTooSmall(_) => {
                    let cap = space.len().max(1) as u64;
                    if k < cap {
                        // Multiplicities and the universe survive a k bump.
                        k = (k * 2).min(cap);
                        continue;
                    }
                    // k is already saturated: the only remaining lever is
                    // the universe itself.
                    carried_queries += sampler.queries();
                    carried_rounds += sampler.rounds();
                    m += 1;
                    continue 'universe;
                }
                FailureKind::UniverseInadequate(_) => {
                    carried_queries += sampler.queries();
                    carried_rounds += sampler.rounds();
                    m += 1;
                    continue 'universe;
                }
            }
        }
    }
}

fn apply_safety(k: u64, safety: f64) -> u64 {
    let scaled = (k as f64 * safety).ceil();
    if !scaled.is_finite() || scaled < 1.0 {
        1
    } else {
        scaled as u64
    }
}

fn build_universe(
    gens: &GeneratorSet,
    source: &UniverseSource,
    m: u64,
    rng: &mut ChaCha8Rng,
) -> Result<(GroebnerViolatorSpace, Option<u64>)> {
    match source {
        UniverseSource::Toric { matrix, degree } => {
            let d = degree.unwrap_or(m).max(1);
            Ok((toric_universe(matrix, d, &gens.ring)?, None))
        }
        UniverseSource::OraclePadding { padding } => {
            let uni = oracle_universe(gens, *padding, rng)?;
            let delta = uni.reduced_basis.len() as u64;
            Ok((uni.space, Some(delta)))
        }
        UniverseSource::Fixed { space } => Ok((space.clone(), None)),
    }
}

#[allow(clippy::too_many_arguments)]
fn report(
    space: &GroebnerViolatorSpace,
    candidate: &[usize],
    k: u64,
    m: u64,
    escalations: u32,
    primitive_queries: u64,
    rounds: u64,
    params: &PipelineParams,
    delta_actual: Option<u64>,
    wall_ms: u64,
) -> RunReport {
    let basis: Vec<String> = candidate
        .iter()
        .map(|&i| format_polynomial(space.element(i)))
        .collect();
    let mut initial_monomials: Vec<String> = candidate
        .iter()
        .map(|&i| space.element(i).leading_monomial().unwrap().to_string())
        .collect();
    initial_monomials.sort();
    RunReport {
        basis,
        initial_monomials,
        k_used: k,
        m_used: m,
        universe_size: space.len(),
        primitive_queries,
        rounds,
        escalations,
        verified: true,
        seed: params.seed,
        wall_ms,
        delta_actual,
        safety_factor: params.safety,
        multiplicity_policy: "preserve-on-k-escalation, reset-on-universe-rebuild".into(),
    }
}

/// File-facing pipeline configuration (the CLI surface).
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub order: Option<OrderKind>,
    pub field: Option<FieldKind>,
    /// `oracle`, `constant:<k>[,<m>]`, or `regression:<model-file>`.
    pub predictor: String,
    /// `oracle:<padding>`, `toric:<matrix-file>`, or `file:<universe-file>`.
    pub universe: String,
    /// Explicit toric degree override.
    pub degree: Option<u64>,
    pub params: PipelineParams,
    pub stats_path: Option<PathBuf>,
}

/// Loads everything named by the config, runs the pipeline, and writes the
/// stats file when requested.
pub fn run_spark(config: &PipelineConfig) -> Result<RunReport> {
    let gens = read_ideal_file(&config.input, config.order, config.field)?;
    let predictor = Predictor::parse_spec(&config.predictor)?;
    let universe = parse_universe_spec(&config.universe, config.degree)?;
    let report = run_pipeline(&gens, &predictor, &universe, &config.params)?;
    if let Some(path) = &config.stats_path {
        let mut file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(&mut file, &report)?;
        writeln!(file)?;
    }
    Ok(report)
}

/// Parses `oracle:<padding>`, `toric:<file>`, or `file:<path>`.
pub fn parse_universe_spec(spec: &str, degree: Option<u64>) -> Result<UniverseSource> {
    if let Some(padding) = spec.strip_prefix("oracle:") {
        let padding: usize = padding
            .parse()
            .map_err(|_| Error::Parse(format!("bad padding in `{spec}`")))?;
        return Ok(UniverseSource::OraclePadding { padding });
    }
    if let Some(path) = spec.strip_prefix("toric:") {
        let file = std::fs::File::open(path)?;
        let matrix = ToricMatrix::read_from(BufReader::new(file))?;
        return Ok(UniverseSource::Toric { matrix, degree });
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let file = std::fs::File::open(path)?;
        let space = GroebnerViolatorSpace::read_from(BufReader::new(file))?;
        return Ok(UniverseSource::Fixed { space });
    }
    Err(Error::Parse(format!(
        "unknown universe `{spec}` (expected oracle:<padding>, toric:<file>, or file:<path>)"
    )))
}

/// Reads an ideal file: a ring header line, then one generator per line.
/// Explicit order/field arguments override the header.
pub fn read_ideal_file(
    path: &Path,
    order: Option<OrderKind>,
    field: Option<FieldKind>,
) -> Result<GeneratorSet> {
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse(format!("{} is empty", path.display())))??;
    let mut ring = parse_ring_header(&header)?;
    if let Some(order) = order {
        ring.order = MonomialOrder::new(order);
    }
    if let Some(field) = field {
        ring.field = field.validated()?;
    }
    let mut gens = Vec::new();
    for line in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        gens.push(parse_polynomial(trimmed, &ring)?);
    }
    GeneratorSet::new(ring, gens)
}

/// Writes an ideal file in the format `read_ideal_file` accepts.
pub fn write_ideal_file(path: &Path, gens: &GeneratorSet) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "{}", gens.ring)?;
    for g in &gens.generators {
        writeln!(file, "{}", format_polynomial(g))?;
    }
    Ok(())
}
