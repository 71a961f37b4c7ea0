//! Command-line harness: norm evaluation, decomposition, the blow-up family,
//! and the corpus-level inequality checks, with JSON/CSV reporting.
//!
//! Exit codes: 0 on success, 1 when a checked invariant is violated (the
//! violation is named in the report), 2 on malformed input or flags.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use padic_lp::counterexample::{
    blowup_sweep, norm_report, sweep_to_csv, verify_sweep, CounterexampleParams,
};
use padic_lp::exact::ExactStepFn;
use padic_lp::harness::{
    bv_comparison_corpus, improved_sobolev_max_ratio, random_corpus, random_sequences,
    sequence_interpolation_check, CorpusModel, InterpolationSpec, ReportStatus,
};
use padic_lp::lp::decompose;
use padic_lp::norms::{compute_norm, BvMode, NormFamily, NormSpec};
use padic_lp::step::{sample_log_norm, sample_reciprocal_norm};
use padic_lp::{DyadicStepFunction, Exponent, FunctionFile};

#[derive(Parser)]
#[command(
    name = "padic-lp",
    version,
    about = "Littlewood-Paley analysis on the 2-adic integers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a norm of a function file
    Norm(NormArgs),
    /// Emit the Littlewood-Paley decomposition of a function file
    Decompose(DecomposeArgs),
    /// Build one blow-up family member and verify its closed-form norms
    Counterexample(CounterexampleArgs),
    /// Sweep the blow-up family and emit one row per member
    Sweep(SweepArgs),
    /// Check the weighted-sequence interpolation bound with its explicit constant
    CheckInterp(CheckInterpArgs),
    /// Improved-Sobolev corpus report with cross-resolution stability check
    CheckSobolev(CheckSobolevArgs),
    /// Two-sided BV vs Besov comparison on a corpus plus named sample functions
    CheckBv(CheckBvArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Lebesgue,
    Sobolev,
    Besov,
    Bv,
    SecondDifference,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Dyadic,
}

impl From<ModeArg> for BvMode {
    fn from(m: ModeArg) -> BvMode {
        match m {
            ModeArg::Exact => BvMode::Exact,
            ModeArg::Dyadic => BvMode::Dyadic,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    UniformSamples,
    RandomBlocks,
    SparseBlocks,
}

impl From<ModelArg> for CorpusModel {
    fn from(m: ModelArg) -> CorpusModel {
        match m {
            ModelArg::UniformSamples => CorpusModel::UniformSamples,
            ModelArg::RandomBlocks => CorpusModel::RandomBlocks,
            ModelArg::SparseBlocks => CorpusModel::SparseBlocks,
        }
    }
}

#[derive(Args)]
struct NormArgs {
    /// Function file (JSON {level, samples})
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Smoothness exponent
    #[arg(long, default_value_t = 0.0)]
    s: f64,
    /// Integrability exponent (number or "inf")
    #[arg(long, default_value = "2")]
    p: String,
    /// Summation exponent (number or "inf")
    #[arg(long, default_value = "inf")]
    q: String,
    /// Drop the mean term
    #[arg(long)]
    homogeneous: bool,
    /// Shift coverage for bv / second-difference
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Evaluate in exact dyadic-rational arithmetic where supported
    #[arg(long)]
    exact_arith: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    /// Directory for the mean and per-block function files; stdout bundle if absent
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    j0: u32,
    #[arg(long)]
    j1: u32,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    m_min: u32,
    #[arg(long)]
    m_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckInterpArgs {
    #[arg(long, default_value_t = 1.0)]
    s1: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.5)]
    theta: f64,
    /// Number of random sequences
    #[arg(long, default_value_t = 10_000)]
    count: usize,
    /// Maximum sequence length
    #[arg(long, default_value_t = 32)]
    max_len: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Check a single sequence from a JSON array file instead of generating
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckSobolevArgs {
    #[arg(long, default_value_t = 4.0 / 3.0)]
    p: f64,
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    #[arg(long, default_value_t = 1.0)]
    s1: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Resolutions to compare (the stability check spans the extremes)
    #[arg(long, value_delimiter = ',', default_values_t = vec![6u32, 8, 10])]
    levels: Vec<u32>,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModelArg::UniformSamples)]
    model: ModelArg,
    /// Allowed relative growth of the max ratio across resolutions
    #[arg(long, default_value_t = 0.25)]
    growth_tolerance: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckBvArgs {
    #[arg(short = 'J', long, default_value_t = 8)]
    level: u32,
    #[arg(long, default_value_t = 500)]
    count: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModelArg::UniformSamples)]
    model: ModelArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Outcome {
    Pass,
    Violation(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Violation(name)) => {
            eprintln!("violation: {name}");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Norm(args) => run_norm(args),
        Command::Decompose(args) => run_decompose(args),
        Command::Counterexample(args) => run_counterexample(args),
        Command::Sweep(args) => run_sweep(args),
        Command::CheckInterp(args) => run_check_interp(args),
        Command::CheckSobolev(args) => run_check_sobolev(args),
        Command::CheckBv(args) => run_check_bv(args),
    }
}

fn read_function(path: &PathBuf) -> Result<DyadicStepFunction> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read function file {}", path.display()))?;
    let file: FunctionFile = serde_json::from_str(&text)
        .with_context(|| format!("malformed function file {}", path.display()))?;
    DyadicStepFunction::try_from(file)
        .with_context(|| format!("invalid function data in {}", path.display()))
}

fn emit(output: &Option<PathBuf>, content: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("cannot write output file {}", path.display())),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .context("cannot write to stdout"),
    }
}

fn emit_json(output: &Option<PathBuf>, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(output, &text)
}

fn parse_exponent(text: &str) -> Result<Exponent> {
    text.parse::<Exponent>()
        .map_err(|e| anyhow!("bad exponent {text:?}: {e}"))
}

fn build_norm_spec(args: &NormArgs) -> Result<NormSpec> {
    let p = parse_exponent(&args.p)?;
    let q = parse_exponent(&args.q)?;
    let spec = match args.family {
        FamilyArg::Lebesgue => NormSpec::lebesgue(p)?,
        FamilyArg::Sobolev => NormSpec::sobolev(args.s, p, args.homogeneous)?,
        FamilyArg::Besov => NormSpec::besov(args.s, q, p, args.homogeneous)?,
        FamilyArg::Bv => NormSpec::bv(),
        FamilyArg::SecondDifference => NormSpec::second_difference(),
    };
    Ok(spec)
}

/// Exact-arithmetic evaluation for the specs the integer path supports.
fn compute_norm_exact(f: &DyadicStepFunction, spec: &NormSpec, mode: BvMode) -> Result<f64> {
    let exact = ExactStepFn::from_function(f);
    let unsupported =
        |what: &str| bail!("exact arithmetic unavailable for {what}; rerun without --exact-arith");
    match spec.family {
        NormFamily::Lebesgue => match spec.p {
            Exponent::Finite(p) => {
                if p == 1.0 {
                    Ok(exact.l1_norm().to_f64())
                } else if p == 2.0 {
                    Ok(exact.l2_norm_squared().to_f64().sqrt())
                } else {
                    unsupported("lebesgue exponents other than 1, 2, inf")
                }
            }
            Exponent::Infinity => Ok(exact.linf_norm().to_f64()),
        },
        NormFamily::Besov => {
            if !spec.q.is_infinite() || spec.s.fract() != 0.0 || !spec.homogeneous {
                return unsupported("besov specs other than homogeneous integer s with q = inf");
            }
            let norms = exact.block_norms();
            let s = spec.s as i32;
            let per_block: Vec<padic_lp::exact::DyadicRational> = match spec.p {
                Exponent::Infinity => norms.linf.clone(),
                Exponent::Finite(p) => {
                    if p == 1.0 {
                        norms.l1.clone()
                    } else {
                        return unsupported("besov integrability exponents other than 1, inf");
                    }
                }
            };
            let sup = per_block
                .iter()
                .enumerate()
                .map(|(j, v)| v.mul_pow2(s * j as i32))
                .fold(padic_lp::exact::DyadicRational::ZERO, |acc, v| acc.max(v));
            Ok(sup.to_f64())
        }
        NormFamily::Bv => {
            let (value, _) = match mode {
                BvMode::Exact => exact.bv_seminorm_exact(),
                BvMode::Dyadic => exact.bv_seminorm_dyadic(),
            };
            Ok(value.to_f64())
        }
        NormFamily::SecondDifference => Ok(exact.second_difference_modulus().0.to_f64()),
        NormFamily::Sobolev => unsupported("sobolev norms (pointwise square roots)"),
    }
}

fn run_norm(args: NormArgs) -> Result<Outcome> {
    let f = read_function(&args.input)?;
    let spec = build_norm_spec(&args)?;
    let mode = BvMode::from(args.mode);
    let value = if args.exact_arith {
        std::panic::catch_unwind(|| compute_norm_exact(&f, &spec, mode))
            .map_err(|_| anyhow!("exact arithmetic overflow; quantize the input samples"))??
    } else {
        compute_norm(&f, &spec, mode)?.value
    };
    let report = json!({
        "spec": spec,
        "level": f.level(),
        "exact_arith": args.exact_arith,
        "value": value,
    });
    emit_json(&args.output, &report)?;
    Ok(Outcome::Pass)
}

fn run_decompose(args: DecomposeArgs) -> Result<Outcome> {
    let f = read_function(&args.input)?;
    let dec = decompose(&f);
    let mean_file = FunctionFile {
        level: 0,
        samples: vec![dec.mean()],
    };
    let block_files: Vec<FunctionFile> = dec.blocks().iter().map(FunctionFile::from).collect();
    match &args.output {
        Some(dir) => {
            fs::create_dir_all(dir)
                .with_context(|| format!("cannot create output directory {}", dir.display()))?;
            let mut written = vec![String::from("s0.json")];
            fs::write(dir.join("s0.json"), serde_json::to_string(&mean_file)?)?;
            for (j, file) in block_files.iter().enumerate() {
                let name = format!("delta_{j:02}.json");
                fs::write(dir.join(&name), serde_json::to_string(file)?)?;
                written.push(name);
            }
            let manifest = json!({
                "level": f.level(),
                "mean": dec.mean(),
                "files": written,
            });
            emit_json(&None, &manifest)?;
        }
        None => {
            let bundle = json!({
                "level": f.level(),
                "mean": dec.mean(),
                "blocks": block_files,
            });
            emit_json(&None, &bundle)?;
        }
    }
    Ok(Outcome::Pass)
}

fn run_counterexample(args: CounterexampleArgs) -> Result<Outcome> {
    let params = CounterexampleParams::new(args.alpha, args.beta, args.j0, args.j1)?;
    let report = norm_report(&params)?;
    let check = report.check(1e-12);
    let status = if check.is_ok() { "pass" } else { "fail" };
    let violation = check.as_ref().err().map(|e| e.to_string());
    let payload = json!({
        "report": report,
        "status": status,
        "violation": violation,
    });
    emit_json(&args.output, &payload)?;
    match check {
        Ok(()) => Ok(Outcome::Pass),
        Err(e) => Ok(Outcome::Violation(e.to_string())),
    }
}

fn run_sweep(args: SweepArgs) -> Result<Outcome> {
    let rows = blowup_sweep(args.m_min, args.m_max)?;
    let contract = verify_sweep(&rows);
    match args.format {
        Format::Csv => emit(&args.output, &sweep_to_csv(&rows))?,
        Format::Json => {
            let payload = json!({
                "rows": rows,
                "status": if contract.is_ok() { "pass" } else { "fail" },
                "violation": contract.as_ref().err().map(|e| e.to_string()),
            });
            emit_json(&args.output, &payload)?;
        }
    }
    match contract {
        Ok(()) => Ok(Outcome::Pass),
        Err(e) => Ok(Outcome::Violation(e.to_string())),
    }
}

fn run_check_interp(args: CheckInterpArgs) -> Result<Outcome> {
    let spec = InterpolationSpec::new(args.s1, args.beta, args.theta)?;
    let constant = spec
        .derived_constant()
        .expect("default exponents always have a constant");

    let sequences: Vec<Vec<f64>> = match &args.input {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read sequence file {}", path.display()))?;
            let seq: Vec<f64> = serde_json::from_str(&text)
                .with_context(|| format!("malformed sequence file {}", path.display()))?;
            vec![seq]
        }
        None => random_sequences(args.count, args.max_len, args.seed),
    };

    let mut checked = 0usize;
    let mut vacuous = 0usize;
    let mut max_ratio = 0.0f64;
    let mut violations: Vec<serde_json::Value> = Vec::new();
    for (index, seq) in sequences.iter().enumerate() {
        let report = sequence_interpolation_check(seq, &spec)?;
        match report.status {
            ReportStatus::Vacuous => vacuous += 1,
            ReportStatus::Pass => {
                checked += 1;
                if let Some(r) = report.ratio {
                    max_ratio = max_ratio.max(r);
                }
            }
            ReportStatus::Fail => {
                checked += 1;
                violations.push(json!({
                    "index": index,
                    "lhs": report.lhs,
                    "rhs": report.rhs,
                }));
            }
        }
    }
    let status = if violations.is_empty() {
        "pass"
    } else {
        "fail"
    };
    let payload = json!({
        "spec": spec,
        "s": spec.s(),
        "constant": constant,
        "checked": checked,
        "vacuous": vacuous,
        "max_ratio": max_ratio,
        "headroom": constant - max_ratio,
        "violations": violations,
        "status": status,
    });
    emit_json(&args.output, &payload)?;
    if status == "pass" {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::Violation(format!(
            "sequence interpolation bound exceeded its constant {constant}"
        )))
    }
}

fn run_check_sobolev(args: CheckSobolevArgs) -> Result<Outcome> {
    if args.levels.is_empty() {
        bail!("need at least one level");
    }
    let mut per_level = Vec::new();
    for &level in &args.levels {
        let corpus = random_corpus(level, args.count, args.seed, args.model.into(), true)?;
        let max_ratio = improved_sobolev_max_ratio(&corpus, args.p, args.q, args.s1, args.beta)?;
        per_level.push(json!({ "level": level, "max_ratio": max_ratio }));
    }
    let first = per_level[0]["max_ratio"].as_f64().unwrap();
    let last = per_level[per_level.len() - 1]["max_ratio"]
        .as_f64()
        .unwrap();
    let growth = last / first - 1.0;
    let stable = growth < args.growth_tolerance;
    let payload = json!({
        "spec": { "p": args.p, "q": args.q, "s1": args.s1, "beta": args.beta },
        "count": args.count,
        "seed": args.seed,
        "per_level": per_level,
        "growth": growth,
        "growth_tolerance": args.growth_tolerance,
        "status": if stable { "pass" } else { "fail" },
    });
    emit_json(&args.output, &payload)?;
    if stable {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::Violation(format!(
            "max ratio grew by {growth:.3} across resolutions, beyond the {} tolerance",
            args.growth_tolerance
        )))
    }
}

fn run_check_bv(args: CheckBvArgs) -> Result<Outcome> {
    let corpus = random_corpus(args.level, args.count, args.seed, args.model.into(), true)?;
    let comparisons = bv_comparison_corpus(&corpus)?;
    let ratios: Vec<f64> = comparisons.iter().filter_map(|c| c.ratio).collect();
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);

    let mut named = Vec::new();
    let indicator = DyadicStepFunction::indicator(1, 0, 1)?;
    let log_sample = sample_log_norm(args.level.min(10))?;
    let reciprocal = sample_reciprocal_norm(args.level.min(8), args.level.max(8))?;
    for (name, f) in [
        ("indicator_q_1_0", &indicator),
        ("log_norm_sample", &log_sample),
        ("reciprocal_norm_sample", &reciprocal),
    ] {
        let c = padic_lp::norms::bv_besov_comparison(f)?;
        named.push(json!({ "name": name, "bv": c.bv, "besov": c.besov, "ratio": c.ratio }));
    }

    let tol = 1e-9;
    let in_band = |r: f64| (2.0 - tol..=4.0 + tol).contains(&r);
    let all_in_band = ratios.iter().all(|&r| in_band(r));
    let named_in_band = named
        .iter()
        .filter_map(|n| n["ratio"].as_f64())
        .all(in_band);
    let status = all_in_band && named_in_band;
    let payload = json!({
        "level": args.level,
        "count": args.count,
        "seed": args.seed,
        "min_ratio": min_ratio,
        "max_ratio": max_ratio,
        "named": named,
        "status": if status { "pass" } else { "fail" },
        "violation": if status { serde_json::Value::Null } else {
            json!("a bv/besov ratio left the two-sided band [2, 4]")
        },
    });
    emit_json(&args.output, &payload)?;
    if status {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::Violation(
            "a bv/besov ratio left the two-sided band [2, 4]".into(),
        ))
    }
}
