//! Prediction of the minimal-basis cardinality k and degree bound m.
//!
//! Three interchangeable sources: an exact oracle (a Buchberger run), a
//! linear-regression baseline over cheap generator statistics, and a user
//! constant. The regression exists as a calibrated floor for pluggable
//! learned models, not as a strong predictor in its own right.

use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::buchberger::{buchberger, minimalize, BuchbergerOptions, Strategy};
use crate::error::{Error, Result};
use crate::poly::parse::{format_polynomial, parse_polynomial};
use crate::poly::{Coeff, FieldKind, GeneratorSet, MonomialOrder, OrderKind, Polynomial, Ring};
use crate::universe::{random_monomial, random_monomial_exact};

/// Version tag written into model files; bump when the feature layout
/// changes.
pub const FEATURE_VERSION: u32 = 1;

/// Number of entries produced by [`extract_features`] (without intercept).
pub const FEATURE_COUNT: usize = 12;

/// Cheap deterministic statistics of a generating set:
/// variable count, generator count, min/max/mean total degree,
/// min/max/mean support size, mean term count, mean and max coefficient
/// magnitude, and a homogeneity flag.
pub fn extract_features(gens: &GeneratorSet) -> Vec<f64> {
    let degs: Vec<f64> = gens
        .generators
        .iter()
        .map(|g| g.total_degree().unwrap_or(0) as f64)
        .collect();
    let sups: Vec<f64> = gens.generators.iter().map(|g| g.support() as f64).collect();
    let terms: Vec<f64> = gens
        .generators
        .iter()
        .map(|g| g.term_count() as f64)
        .collect();
    let mags: Vec<f64> = gens
        .generators
        .iter()
        .flat_map(|g| g.terms().iter().map(|(c, _)| c.magnitude()))
        .collect();
    let homogeneous = gens.generators.iter().all(|g| g.is_homogeneous());
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    vec![
        gens.ring.n as f64,
        gens.len() as f64,
        min(&degs),
        max(&degs),
        mean(&degs),
        min(&sups),
        max(&sups),
        mean(&sups),
        mean(&terms),
        mean(&mags),
        max(&mags),
        if homogeneous { 1.0 } else { 0.0 },
    ]
}

/// Where a prediction came from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredictionSource {
    Oracle,
    Regression,
    Constant,
}

/// Predicted minimal-basis cardinality and degree bound, both at least 1.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Prediction {
    pub k: u64,
    pub m: u64,
    pub source: PredictionSource,
}

/// Exact prediction: run the Buchberger oracle and read the minimal basis
/// size and its maximum total degree.
pub fn oracle_predict(gens: &GeneratorSet) -> Result<Prediction> {
    let basis = minimalize(&buchberger(
        gens,
        &BuchbergerOptions {
            strategy: Strategy::Degree,
            coprime_criterion: false,
            max_pairs: Some(500_000),
        },
    )?);
    let m = basis
        .elements
        .iter()
        .map(|(p, _)| p.total_degree().unwrap_or(0))
        .max()
        .unwrap_or(0);
    Ok(Prediction {
        k: basis.len() as u64,
        m: m.max(1),
        source: PredictionSource::Oracle,
    })
}

/// A generating set with its oracle labels.
#[derive(Clone, Debug)]
pub struct LabeledIdeal {
    pub gens: GeneratorSet,
    pub k: u64,
    pub m: u64,
}

/// Generates `count` random binomial ideals, each with `s` binomials of
/// max total degree exactly `d` in `n` variables over the rationals with
/// grevlex, labeled by the oracle. One monomial of each binomial has
/// degree exactly `d`, the other degree uniform on 0..=d; both exponent
/// vectors are uniform over their degree simplex and coincidences are
/// redrawn. Deterministic per seed. Ideals whose oracle run exceeds the
/// pair cap are discarded and redrawn.
pub fn generate_random_binomial_ideals(
    n: usize,
    s: usize,
    d: u64,
    count: usize,
    seed: u64,
) -> Result<Vec<LabeledIdeal>> {
    if n < 1 || s < 1 || d < 1 {
        return Err(Error::Config("n, s, d must all be at least 1".into()));
    }
    let ring = Ring::new(n, FieldKind::Rational, MonomialOrder::grevlex());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut discarded = 0u64;
    while out.len() < count {
        let gens = random_binomial_set(&ring, s, d, &mut rng)?;
        match oracle_predict(&gens) {
            Ok(pred) => out.push(LabeledIdeal {
                gens,
                k: pred.k,
                m: pred.m,
            }),
            Err(Error::ComputationCap { .. }) => {
                discarded += 1;
                if discarded > 100 + 10 * count as u64 {
                    return Err(Error::Internal(
                        "too many oracle runs hit the pair cap".into(),
                    ));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// One random binomial generating set (monic differences of two distinct
/// random monomials).
pub fn random_binomial_set<R: Rng>(
    ring: &Ring,
    s: usize,
    d: u64,
    rng: &mut R,
) -> Result<GeneratorSet> {
    let one = Coeff::one(ring.field);
    let minus_one = one.neg();
    let mut gens = Vec::with_capacity(s);
    for _ in 0..s {
        loop {
            let u = random_monomial_exact(ring.n, d, rng);
            let v = random_monomial(ring.n, d, rng);
            if u == v {
                continue;
            }
            let p = Polynomial::from_terms(
                vec![(one.clone(), u), (minus_one.clone(), v)],
                &ring.order,
                ring.n,
            )
            .normalize();
            gens.push(p);
            break;
        }
    }
    GeneratorSet::new(ring.clone(), gens)
}

/// Ordinary least squares over the feature vector (plus intercept), one
/// weight vector per target. Fit via the normal equations with a tiny
/// ridge fallback when the design is singular.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegressionModel {
    pub weights_k: Vec<f64>,
    pub weights_m: Vec<f64>,
    pub feature_version: u32,
    pub seed: u64,
    pub dataset_size: usize,
}

impl RegressionModel {
    fn predict_raw(&self, weights: &[f64], features: &[f64]) -> f64 {
        weights[0]
            + weights[1..]
                .iter()
                .zip(features)
                .map(|(w, x)| w * x)
                .sum::<f64>()
    }

    /// Continuous predictions for a feature vector: (k, m).
    pub fn predict_values(&self, features: &[f64]) -> (f64, f64) {
        (
            self.predict_raw(&self.weights_k, features),
            self.predict_raw(&self.weights_m, features),
        )
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)?;
        Ok(())
    }

    pub fn read_from(r: impl std::io::Read) -> Result<Self> {
        let model: RegressionModel = serde_json::from_reader(r)?;
        if model.feature_version != FEATURE_VERSION {
            return Err(Error::Config(format!(
                "model feature version {} does not match this build's {}",
                model.feature_version, FEATURE_VERSION
            )));
        }
        Ok(model)
    }
}

/// Fits both targets on the dataset. Deterministic given dataset order;
/// the seed is recorded as metadata only.
pub fn fit(data: &[LabeledIdeal], seed: u64) -> Result<RegressionModel> {
    let dim = FEATURE_COUNT + 1;
    if data.len() <= dim {
        return Err(Error::Config(format!(
            "need more than {dim} samples to fit, got {}",
            data.len()
        )));
    }
    let rows: Vec<Vec<f64>> = data
        .iter()
        .map(|ideal| {
            let mut row = Vec::with_capacity(dim);
            row.push(1.0);
            row.extend(extract_features(&ideal.gens));
            row
        })
        .collect();
    let yk: Vec<f64> = data.iter().map(|i| i.k as f64).collect();
    let ym: Vec<f64> = data.iter().map(|i| i.m as f64).collect();
    Ok(RegressionModel {
        weights_k: normal_equations(&rows, &yk)?,
        weights_m: normal_equations(&rows, &ym)?,
        feature_version: FEATURE_VERSION,
        seed,
        dataset_size: data.len(),
    })
}

/// Solves (XᵀX) w = Xᵀy, retrying with a tiny diagonal regularizer when
/// the design is singular.
fn normal_equations(rows: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let dim = rows[0].len();
    let mut xtx = vec![vec![0.0f64; dim]; dim];
    let mut xty = vec![0.0f64; dim];
    for (row, &target) in rows.iter().zip(y) {
        for i in 0..dim {
            for j in 0..dim {
                xtx[i][j] += row[i] * row[j];
            }
            xty[i] += row[i] * target;
        }
    }
    if let Some(w) = solve_linear(xtx.clone(), xty.clone()) {
        return Ok(w);
    }
    let scale = (0..dim).map(|i| xtx[i][i]).sum::<f64>() / dim as f64;
    let lambda = 1e-9 * scale.max(1e-12);
    for (i, row) in xtx.iter_mut().enumerate() {
        row[i] += lambda;
    }
    solve_linear(xtx, xty)
        .ok_or_else(|| Error::Internal("normal equations singular even with ridge".into()))
}

/// Gaussian elimination with partial pivoting; None when singular.
#[allow(clippy::needless_range_loop)]
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

/// Held-out coefficients of determination for both targets. `None` when
/// the labels are constant (r² undefined). Computed on the continuous
/// regression output, before the integer rounding `predict` applies.
#[derive(Clone, Copy, Debug)]
pub struct Evaluation {
    pub r2_k: Option<f64>,
    pub r2_m: Option<f64>,
}

pub fn evaluate(model: &RegressionModel, heldout: &[LabeledIdeal]) -> Evaluation {
    let mut preds_k = Vec::with_capacity(heldout.len());
    let mut preds_m = Vec::with_capacity(heldout.len());
    for ideal in heldout {
        let features = extract_features(&ideal.gens);
        let (k, m) = model.predict_values(&features);
        preds_k.push(k);
        preds_m.push(m);
    }
    let yk: Vec<f64> = heldout.iter().map(|i| i.k as f64).collect();
    let ym: Vec<f64> = heldout.iter().map(|i| i.m as f64).collect();
    Evaluation {
        r2_k: r_squared(&preds_k, &yk),
        r2_m: r_squared(&preds_m, &ym),
    }
}

/// 1 − SS_res/SS_tot; 0 for the mean predictor, negative for worse.
pub fn r_squared(predictions: &[f64], observed: &[f64]) -> Option<f64> {
    let n = observed.len() as f64;
    let mean = observed.iter().sum::<f64>() / n;
    let ss_tot: f64 = observed.iter().map(|y| (y - mean).powi(2)).sum();
    if ss_tot == 0.0 {
        return None;
    }
    let ss_res: f64 = predictions
        .iter()
        .zip(observed)
        .map(|(p, y)| (y - p).powi(2))
        .sum();
    Some(1.0 - ss_res / ss_tot)
}

/// The pluggable predictor surface used by the pipeline.
#[derive(Clone, Debug)]
pub enum Predictor {
    Oracle,
    Constant { k: u64, m: Option<u64> },
    Regression(RegressionModel),
}

impl Predictor {
    /// Predicts (k, m) for a generating set. When the chosen source has no
    /// degree estimate, m falls back to the maximum generator degree plus
    /// `degree_slack`.
    pub fn predict(&self, gens: &GeneratorSet, degree_slack: u64) -> Result<Prediction> {
        let fallback_m = gens
            .generators
            .iter()
            .map(|g| g.total_degree().unwrap_or(0))
            .max()
            .unwrap_or(1)
            .max(1)
            + degree_slack;
        match self {
            Predictor::Oracle => oracle_predict(gens),
            Predictor::Constant { k, m } => {
                if *k == 0 {
                    return Err(Error::Config("constant k must be at least 1".into()));
                }
                Ok(Prediction {
                    k: *k,
                    m: m.unwrap_or(fallback_m).max(1),
                    source: PredictionSource::Constant,
                })
            }
            Predictor::Regression(model) => {
                let features = extract_features(gens);
                let (k, m) = model.predict_values(&features);
                Ok(Prediction {
                    k: round_up_at_least_one(k),
                    m: round_up_at_least_one(m),
                    source: PredictionSource::Regression,
                })
            }
        }
    }

    /// Parses `oracle`, `constant:<k>[,<m>]`, or `regression:<model-file>`.
    pub fn parse_spec(spec: &str) -> Result<Predictor> {
        if spec == "oracle" {
            return Ok(Predictor::Oracle);
        }
        if let Some(rest) = spec.strip_prefix("constant:") {
            let mut parts = rest.split(',');
            let k: u64 = parts
                .next()
                .unwrap_or("")
                .parse()
                .map_err(|_| Error::Parse(format!("bad constant k in `{spec}`")))?;
            let m = match parts.next() {
                None => None,
                Some(m) => Some(
                    m.parse()
                        .map_err(|_| Error::Parse(format!("bad constant m in `{spec}`")))?,
                ),
            };
            return Ok(Predictor::Constant { k, m });
        }
        if let Some(path) = spec.strip_prefix("regression:") {
            let file = std::fs::File::open(path)?;
            return Ok(Predictor::Regression(RegressionModel::read_from(file)?));
        }
        Err(Error::Parse(format!(
            "unknown predictor `{spec}` (expected oracle, constant:<k>[,<m>], or regression:<file>)"
        )))
    }
}

/// Rounding used when a continuous estimate feeds the sampler: k must
/// upper-bound the true dimension for the output to be a basis, so round
/// up, never below 1.
pub fn round_up_at_least_one(v: f64) -> u64 {
    if !v.is_finite() || v < 1.0 {
        1
    } else {
        v.ceil() as u64
    }
}

/// One JSONL dataset record.
#[derive(Serialize, Deserialize)]
struct DatasetRecord {
    generators: Vec<String>,
    n: usize,
    order: String,
    k: u64,
    m: u64,
}

/// Writes a labeled dataset, one JSON record per line. Coefficients are
/// rational; the field is implicitly QQ.
pub fn write_dataset(mut w: impl Write, data: &[LabeledIdeal]) -> Result<()> {
    for ideal in data {
        let record = DatasetRecord {
            generators: ideal
                .gens
                .generators
                .iter()
                .map(format_polynomial)
                .collect(),
            n: ideal.gens.ring.n,
            order: ideal.gens.ring.order.to_string(),
            k: ideal.k,
            m: ideal.m,
        };
        serde_json::to_writer(&mut w, &record)?;
        writeln!(w)?;
    }
    Ok(())
}

pub fn read_dataset(r: impl BufRead) -> Result<Vec<LabeledIdeal>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: DatasetRecord = serde_json::from_str(&line)?;
        let ring = Ring::new(
            record.n,
            FieldKind::Rational,
            MonomialOrder::new(OrderKind::from_str(&record.order)?),
        );
        let gens = record
            .generators
            .iter()
            .map(|s| parse_polynomial(s, &ring))
            .collect::<Result<Vec<_>>>()?;
        out.push(LabeledIdeal {
            gens: GeneratorSet::new(ring, gens)?,
            k: record.k,
            m: record.m,
        });
    }
    Ok(out)
}
