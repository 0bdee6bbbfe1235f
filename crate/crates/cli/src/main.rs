//! Command-line surface: compute (the sampling pipeline), the Buchberger
//! oracle, universe construction and inspection, dataset generation,
//! regression training and prediction, axiom checking, and a query-count
//! scaling benchmark.

use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sparkgb::buchberger::{buchberger, minimalize, reduce, BuchbergerOptions, Strategy};
use sparkgb::error::Error;
use sparkgb::gb_violator::GroebnerViolatorSpace;
use sparkgb::pipeline::{
    read_ideal_file, run_spark, PipelineConfig, PipelineParams,
};
use sparkgb::poly::parse::format_polynomial;
use sparkgb::poly::{FieldKind, GeneratorSet, MonomialOrder, OrderKind, Ring};
use sparkgb::predictor::{
    evaluate, fit, generate_random_binomial_ideals, read_dataset, write_dataset, Predictor,
};
use sparkgb::universe::{
    oracle_universe, prune_universe, toric_universe, universe_size_bound, ToricMatrix,
};
use sparkgb::violator::{check_axioms, Sampler};

#[derive(Parser)]
#[command(
    name = "sparkgb",
    about = "Randomized Gröbner basis computation via violator-space sampling",
    version
)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monomial order override (lex, grlex, grevlex).
    #[arg(long, global = true)]
    order: Option<String>,
    /// Coefficient field override (`QQ` or `Fp:<prime>`).
    #[arg(long, global = true)]
    field: Option<String>,
    /// Write machine-readable statistics to this path.
    #[arg(long, global = true)]
    stats: Option<PathBuf>,
    /// Suppress non-essential output.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full predict -> build -> sample -> check pipeline.
    Compute(ComputeArgs),
    /// Run the Buchberger oracle and print the basis with lineages.
    Buchberger(BuchbergerArgs),
    /// Build, inspect, or prune a sampling universe.
    Universe(UniverseArgs),
    /// Generate a labeled dataset of random binomial ideals.
    Dataset(DatasetArgs),
    /// Fit the regression baseline on a dataset.
    Train(TrainArgs),
    /// Predict (k, m) for an ideal with a trained model.
    Predict(PredictArgs),
    /// Run randomized violator-axiom checks on a universe.
    Axioms(AxiomsArgs),
    /// Sweep primitive-query counts against growing universe sizes.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Ideal file: a `vars=.. order=.. field=..` header, one generator per line.
    #[arg(long)]
    input: PathBuf,
    /// Universe source: `oracle:<padding>`, `toric:<matrix-file>`, or `file:<path>`.
    #[arg(long)]
    universe: String,
    /// Predictor: `oracle`, `constant:<k>[,<m>]`, or `regression:<model-file>`.
    #[arg(long, default_value = "oracle")]
    predictor: String,
    /// Multiplier applied to the predicted k before sampling.
    #[arg(long, default_value_t = 1.5)]
    safety: f64,
    #[arg(long, default_value_t = 8)]
    max_escalations: u32,
    /// Explicit degree for toric universes (otherwise the predicted m).
    #[arg(long)]
    degree: Option<u64>,
    /// Added to the degree fallback when the predictor carries no m.
    #[arg(long, default_value_t = 0)]
    degree_slack: u64,
    #[arg(long, default_value_t = 10_000)]
    round_cap: u64,
}

#[derive(Args)]
struct BuchbergerArgs {
    #[arg(long)]
    input: PathBuf,
    /// Pair selection: first-come or degree.
    #[arg(long, default_value = "first-come")]
    strategy: String,
    /// Print each element's lineage.
    #[arg(long)]
    lineages: bool,
    /// Minimalize the output basis.
    #[arg(long)]
    minimal: bool,
    /// Fully reduce the output basis (implies --minimal).
    #[arg(long)]
    reduced: bool,
    /// Skip S-pairs with coprime leading monomials.
    #[arg(long)]
    coprime_criterion: bool,
}

#[derive(Args)]
struct UniverseArgs {
    /// Toric matrix file (`rows cols` then row-major entries).
    #[arg(long, conflicts_with_all = ["oracle", "input"])]
    toric: Option<PathBuf>,
    /// Degree bound for toric enumeration.
    #[arg(long)]
    degree: Option<u64>,
    /// Ideal file for an oracle universe.
    #[arg(long, conflicts_with = "input")]
    oracle: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    padding: usize,
    /// Existing universe file to inspect or prune.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Report the size and bounds only; skip listing the elements.
    #[arg(long)]
    count_only: bool,
    /// Drop elements with more terms than this.
    #[arg(long)]
    max_terms: Option<usize>,
    /// Drop elements of total degree above this.
    #[arg(long)]
    degree_cap: Option<u64>,
    /// Write the universe file here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Variable count for toric universes (defaults to the matrix columns).
    #[arg(long)]
    vars: Option<usize>,
}

#[derive(Args)]
struct DatasetArgs {
    #[arg(long, default_value_t = 3)]
    vars: usize,
    #[arg(long, default_value_t = 5)]
    gens: usize,
    #[arg(long, default_value_t = 7)]
    degree: u64,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Fraction of the dataset held out for evaluation.
    #[arg(long, default_value_t = 0.2)]
    holdout: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct AxiomsArgs {
    /// Universe file to check.
    #[arg(long, conflicts_with = "toric")]
    universe_file: Option<PathBuf>,
    /// Toric matrix to build a universe from.
    #[arg(long)]
    toric: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    degree: u64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Base ideal file; defaults to a built-in two-generator example.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Comma-separated universe sizes.
    #[arg(long, default_value = "100,200,400,800,1600,3200")]
    sizes: String,
    #[arg(long, default_value_t = 20)]
    seeds_per_size: u64,
    /// Dimension estimate passed to the sampler.
    #[arg(long, default_value_t = 3)]
    k: usize,
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes early (e.g. `| head`)
    // instead of panicking on EPIPE.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::EscalationExhausted { .. } => 2,
        Error::RoundCapExceeded { .. } | Error::ComputationCap { .. } | Error::Internal(_) => 3,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let order = cli
        .order
        .as_deref()
        .map(OrderKind::from_str)
        .transpose()?;
    let field = cli
        .field
        .as_deref()
        .map(FieldKind::from_str)
        .transpose()?;
    match cli.command {
        Command::Compute(args) => {
            let config = PipelineConfig {
                input: args.input,
                order,
                field,
                predictor: args.predictor,
                universe: args.universe,
                degree: args.degree,
                params: PipelineParams {
                    seed: cli.seed,
                    safety: args.safety,
                    max_escalations: args.max_escalations,
                    degree_slack: args.degree_slack,
                    round_cap: args.round_cap,
                },
                stats_path: cli.stats,
            };
            let report = run_spark(&config)?;
            if !cli.quiet {
                println!(
                    "verified minimal basis of size {} (k={}, m={}, |H|={}, queries={}, escalations={})",
                    report.basis.len(),
                    report.k_used,
                    report.m_used,
                    report.universe_size,
                    report.primitive_queries,
                    report.escalations
                );
            }
            for p in &report.basis {
                println!("{p}");
            }
            Ok(())
        }
        Command::Buchberger(args) => {
            let gens = read_ideal_file(&args.input, order, field)?;
            let strategy = match args.strategy.as_str() {
                "first-come" => Strategy::FirstCome,
                "degree" => Strategy::Degree,
                other => {
                    return Err(Error::Parse(format!(
                        "unknown strategy `{other}` (expected first-come or degree)"
                    )))
                }
            };
            let options = BuchbergerOptions {
                strategy,
                coprime_criterion: args.coprime_criterion,
                max_pairs: Some(2_000_000),
            };
            let mut result = buchberger(&gens, &options)?;
            if args.minimal || args.reduced {
                result = minimalize(&result);
            }
            if args.reduced {
                result = reduce(&result);
            }
            for (poly, lineage) in &result.elements {
                if args.lineages {
                    println!("{}    lineage={}", format_polynomial(poly), lineage);
                } else {
                    println!("{}", format_polynomial(poly));
                }
            }
            if !cli.quiet {
                println!(
                    "elements={} longest-lineage-depth={} longest-lineage-leaves={} pairs={} additions={}",
                    result.len(),
                    result.longest_lineage(),
                    result.longest_lineage_leaves(),
                    result.stats.pairs_processed,
                    result.stats.additions
                );
            }
            Ok(())
        }
        Command::Universe(args) => universe_command(cli.seed, order, field, cli.quiet, args),
        Command::Dataset(args) => {
            let data = generate_random_binomial_ideals(
                args.vars, args.gens, args.degree, args.count, cli.seed,
            )?;
            let file = std::fs::File::create(&args.out)?;
            write_dataset(file, &data)?;
            if !cli.quiet {
                println!("wrote {} labeled ideals to {}", data.len(), args.out.display());
            }
            Ok(())
        }
        Command::Train(args) => {
            let file = std::fs::File::open(&args.dataset)?;
            let data = read_dataset(BufReader::new(file))?;
            if !(0.0..1.0).contains(&args.holdout) {
                return Err(Error::Config("holdout must be in [0, 1)".into()));
            }
            let split = ((data.len() as f64) * (1.0 - args.holdout)).round() as usize;
            let split = split.clamp(1, data.len());
            let (train, held) = data.split_at(split);
            let model = fit(train, cli.seed)?;
            let out = std::fs::File::create(&args.out)?;
            model.write_to(out)?;
            if held.is_empty() {
                println!("trained on {} ideals; no holdout requested", train.len());
            } else {
                let eval = evaluate(&model, held);
                let show = |r2: Option<f64>| {
                    r2.map(|v| format!("{v:.4}"))
                        .unwrap_or_else(|| "undefined (constant labels)".into())
                };
                println!(
                    "trained on {} ideals; holdout {}: r2_k={} r2_m={}",
                    train.len(),
                    held.len(),
                    show(eval.r2_k),
                    show(eval.r2_m)
                );
            }
            Ok(())
        }
        Command::Predict(args) => {
            let gens = read_ideal_file(&args.input, order, field)?;
            let predictor =
                Predictor::parse_spec(&format!("regression:{}", args.model.display()))?;
            let prediction = predictor.predict(&gens, 0)?;
            println!("k={} m={} source=regression", prediction.k, prediction.m);
            Ok(())
        }
        Command::Axioms(args) => {
            let space = if let Some(path) = &args.universe_file {
                let file = std::fs::File::open(path)?;
                GroebnerViolatorSpace::read_from(BufReader::new(file))?
            } else if let Some(path) = &args.toric {
                let file = std::fs::File::open(path)?;
                let matrix = ToricMatrix::read_from(BufReader::new(file))?;
                let ring = Ring::new(
                    matrix.cols(),
                    field.unwrap_or(FieldKind::Rational),
                    MonomialOrder::new(order.unwrap_or(OrderKind::Grevlex)),
                );
                toric_universe(&matrix, args.degree, &ring)?
            } else {
                return Err(Error::Config(
                    "axioms needs --universe-file or --toric".into(),
                ));
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let report = check_axioms(&space, args.trials, &mut rng);
            match &report.failure {
                None => {
                    println!(
                        "axioms hold over {} trials on a universe of {} elements",
                        report.trials,
                        space.len()
                    );
                    Ok(())
                }
                Some(failure) => {
                    println!(
                        "axiom failure ({:?}) at trial {}: witness element {}",
                        failure.kind, failure.trial, failure.witness
                    );
                    Err(Error::Internal("violator axioms failed".into()))
                }
            }
        }
        Command::Bench(args) => bench_command(cli.seed, order, field, cli.stats, args),
    }
}

fn universe_command(
    seed: u64,
    order: Option<OrderKind>,
    field: Option<FieldKind>,
    quiet: bool,
    args: UniverseArgs,
) -> Result<(), Error> {
    let space = if let Some(path) = &args.toric {
        let file = std::fs::File::open(path)?;
        let matrix = ToricMatrix::read_from(BufReader::new(file))?;
        let degree = args
            .degree
            .ok_or_else(|| Error::Config("toric universes need --degree".into()))?;
        let n = args.vars.unwrap_or(matrix.cols());
        let ring = Ring::new(
            n,
            field.unwrap_or(FieldKind::Rational),
            MonomialOrder::new(order.unwrap_or(OrderKind::Grevlex)),
        );
        if !quiet && !matrix.zero_columns().is_empty() {
            eprintln!(
                "note: matrix has zero columns at {:?}",
                matrix.zero_columns()
            );
        }
        let space = toric_universe(&matrix, degree, &ring)?;
        let bound = universe_size_bound(n as u64, degree, None, false);
        if !quiet {
            println!(
                "monomials up to degree {degree}: {}; pair bound: {}",
                bound.monomial_count, bound.pair_bound
            );
        }
        space
    } else if let Some(path) = &args.oracle {
        let gens = read_ideal_file(path, order, field)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        oracle_universe(&gens, args.padding, &mut rng)?.space
    } else if let Some(path) = &args.input {
        let file = std::fs::File::open(path)?;
        GroebnerViolatorSpace::read_from(BufReader::new(file))?
    } else {
        return Err(Error::Config(
            "universe needs one of --toric, --oracle, or --input".into(),
        ));
    };
    let space = if args.max_terms.is_some() || args.degree_cap.is_some() {
        if !quiet {
            eprintln!(
                "note: pruning can remove every representative of a minimal \
                 initial monomial; downstream verification will catch that"
            );
        }
        prune_universe(&space, args.max_terms, args.degree_cap)?
    } else {
        space
    };
    println!("universe size: {} ({})", space.len(), space.ring());
    if let Some(out) = &args.out {
        let file = std::fs::File::create(out)?;
        space.write_to(file)?;
    } else if !args.count_only {
        for p in space.elements() {
            println!("{}", format_polynomial(p));
        }
    }
    Ok(())
}

fn bench_command(
    seed: u64,
    order: Option<OrderKind>,
    field: Option<FieldKind>,
    stats: Option<PathBuf>,
    args: BenchArgs,
) -> Result<(), Error> {
    let gens = match &args.input {
        Some(path) => read_ideal_file(path, order, field)?,
        None => built_in_example()?,
    };
    let sizes: Vec<usize> = args
        .sizes
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad size `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    let mut lines = Vec::new();
    let mut points = Vec::new();
    for &size in &sizes {
        let mut total_queries = 0u64;
        for s in 0..args.seeds_per_size {
            let run_seed = seed ^ (size as u64).wrapping_mul(0x9e3779b97f4a7c15) ^ s;
            let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
            let uni = oracle_universe(&gens, size.saturating_sub(3), &mut rng)?;
            let queries = sample_with_growing_k(&uni.space, args.k, run_seed)?;
            total_queries += queries;
        }
        let mean = total_queries as f64 / args.seeds_per_size as f64;
        points.push(((size as f64).ln(), mean.ln()));
        let line = serde_json::json!({
            "universe_size": size,
            "seeds": args.seeds_per_size,
            "mean_primitive_queries": mean,
        });
        println!("{line}");
        lines.push(line);
    }
    let slope = log_log_slope(&points);
    println!("log-log slope: {slope:.4}");
    if let Some(path) = stats {
        let payload = serde_json::json!({
            "k": args.k,
            "points": lines,
            "slope": slope,
            "seed": seed,
        });
        std::fs::write(path, serde_json::to_string_pretty(&payload)?)?;
    }
    Ok(())
}

/// Sampling run that doubles k on a round-cap abort, accumulating the
/// queries of every attempt, so a single unlucky draw cannot sink a sweep
/// and the accounting stays honest.
fn sample_with_growing_k(
    space: &GroebnerViolatorSpace,
    k: usize,
    seed: u64,
) -> Result<u64, Error> {
    let mut k = k.max(1);
    let mut carried = 0u64;
    loop {
        let mut sampler = Sampler::new(space);
        let outcome = sampler.run(k, seed);
        carried += sampler.queries();
        match outcome {
            Ok(_) => return Ok(carried),
            Err(Error::RoundCapExceeded { .. }) if k < space.len() => k *= 2,
            Err(e) => return Err(e),
        }
    }
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|(x, _)| x).sum();
    let sy: f64 = points.iter().map(|(_, y)| y).sum();
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn built_in_example() -> Result<GeneratorSet, Error> {
    use sparkgb::poly::parse::parse_polynomial;
    let ring = Ring::rational_grevlex(3);
    GeneratorSet::new(
        ring.clone(),
        vec![
            parse_polynomial("x1^2 - x2", &ring)?,
            parse_polynomial("x1^3 - x3", &ring)?,
        ],
    )
}
