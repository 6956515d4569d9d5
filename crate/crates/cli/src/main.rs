//! `tandem`: build, verify and decode tandem-duplication reconstruction codes,
//! compute capacity profiles and run the brute-force oracle suites.
//!
//! Exit codes: 0 success, 1 oracle failure, 2 usage or domain error,
//! 3 verification failure.

mod svg;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tandem_core::capacity::{rate_curve, CapacityProfile, DEFAULT_TOLERANCE};
use tandem_core::dupcore::{root, DEFAULT_NODE_CAP};
use tandem_core::oracle::{run_suite, OracleConfig, Suite};
use tandem_core::utr::{
    construction_a, is_utr_code_direct_with_cap, is_utr_code_reduced,
    max_utr_code_exhaustive, optimal_cone_code, reconstruct, simulate_reconstruction,
};
use tandem_core::{DupParams, UtrCode, Verdict, Word};

const EXIT_ORACLE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser)]
#[command(name = "tandem", version, about = "Reconstruction codes for uniform tandem-duplication channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the capacity profile (λ, cap, π₁, θ, x₀, γ₀, R(γ₀)) as JSON.
    Capacity(CapacityArgs),
    /// Write the rate curve R(γ) as CSV, optionally with an SVG plot.
    RateCurve(RateCurveArgs),
    /// Build, verify, inspect, decode with, or simulate a code file.
    #[command(subcommand)]
    Code(CodeCommand),
    /// Run the brute-force oracle suites.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct ParamArgs {
    /// Alphabet size.
    #[arg(long)]
    q: u32,
    /// Duplication length.
    #[arg(long)]
    k: usize,
}

impl ParamArgs {
    fn params(&self) -> Result<DupParams> {
        Ok(DupParams::new(self.q, self.k)?)
    }
}

#[derive(Args)]
struct CapacityArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Root weight fraction; defaults to π₁ - 0.01.
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Args)]
struct RateCurveArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    theta: Option<f64>,
    /// Number of interior grid points.
    #[arg(long, default_value_t = 999)]
    points: usize,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Optional SVG plot path.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildMethod {
    /// Heavy roots with congruence codes in each cone.
    Construction,
    /// Maximum clique over all words (tiny lengths only).
    Exhaustive,
    /// Optimal simplex code in every cone.
    Cones,
}

#[derive(Subcommand)]
enum CodeCommand {
    /// Build a code and write it as JSON.
    Build(BuildArgs),
    /// Check a code with both checkers; prints VALID or the violating pair.
    Verify(VerifyArgs),
    /// Print size, rate and root count.
    Info { code: PathBuf },
    /// Decode reads (one word per line) against a code.
    Decode { code: PathBuf, reads: PathBuf },
    /// Send random codewords through the channel and decode them.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    n: usize,
    /// Number of duplications.
    #[arg(long)]
    t: usize,
    /// Tolerated read overlap; the decoder needs one more read than this.
    #[arg(long = "uncertainty", visible_alias = "N")]
    uncertainty: u64,
    #[arg(long, value_enum, default_value_t = BuildMethod::Construction)]
    method: BuildMethod,
    /// Root weight fraction for the construction.
    #[arg(long)]
    theta: Option<f64>,
    /// File of candidate roots, one per line, for lengths too long to enumerate.
    #[arg(long)]
    roots: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    code: PathBuf,
    /// Override the file's uncertainty.
    #[arg(long = "uncertainty", visible_alias = "N")]
    uncertainty: Option<u64>,
    /// Override the file's duplication count.
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Args)]
struct SimulateArgs {
    code: PathBuf,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    /// Run one suite only.
    #[arg(long, value_parser = parse_suite)]
    suite: Option<Suite>,
    #[arg(long)]
    max_root_len: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: tandem_core::Error| {
        let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Capacity(args) => capacity(args),
        Command::RateCurve(args) => rate_curve_cmd(args),
        Command::Code(CodeCommand::Build(args)) => build(args),
        Command::Code(CodeCommand::Verify(args)) => verify(args),
        Command::Code(CodeCommand::Info { code }) => info(&code),
        Command::Code(CodeCommand::Decode { code, reads }) => decode(&code, &reads),
        Command::Code(CodeCommand::Simulate(args)) => simulate(args),
        Command::Oracle(args) => oracle(args),
    }
}

fn capacity(args: CapacityArgs) -> Result<ExitCode> {
    let profile = CapacityProfile::compute(args.params.params()?, args.theta, args.tol)?;
    println!("{}", profile.to_json());
    Ok(ExitCode::SUCCESS)
}

fn rate_curve_cmd(args: RateCurveArgs) -> Result<ExitCode> {
    let params = args.params.params()?;
    let profile = CapacityProfile::compute(params, args.theta, DEFAULT_TOLERANCE)?;
    let curve = rate_curve(profile.theta, params, args.points)?;
    let mut csv = String::from("gamma,R\n");
    for (gamma, rate) in &curve {
        writeln!(csv, "{gamma},{rate}")?;
    }
    write_file(&args.out, &csv)?;
    if let Some(path) = &args.svg {
        write_file(path, &svg::rate_plot(&curve, &profile))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn build(args: BuildArgs) -> Result<ExitCode> {
    let params = args.params.params()?;
    let code = match args.method {
        BuildMethod::Construction => {
            let roots = args.roots.as_deref().map(|p| read_words(params, p)).transpose()?;
            let built = construction_a(params, args.n, args.t, args.uncertainty, args.theta, roots.as_deref())?;
            eprintln!(
                "{} roots of weight >= {}, {} duplications each",
                built.roots, built.min_weight, built.r
            );
            built.code
        }
        BuildMethod::Exhaustive => max_utr_code_exhaustive(params, args.n, args.uncertainty, args.t)?,
        BuildMethod::Cones => optimal_cone_code(params, args.n, args.uncertainty, args.t)?,
    };
    write_file(&args.out, &code.to_json())?;
    eprintln!("wrote {} codewords (rate {:.4}) to {}", code.len(), code.rate(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let mut code = load_code(&args.code)?;
    if args.uncertainty.is_some() || args.t.is_some() {
        code = code.with_requirements(args.uncertainty.unwrap_or(code.uncertainty()), args.t.unwrap_or(code.t()));
    }
    let direct = is_utr_code_direct_with_cap(&code, node_cap()?)?;
    let reduced = is_utr_code_reduced(&code)?;
    if direct.is_valid() != reduced.is_valid() {
        println!("checkers disagree: direct {direct:?}, reduced {reduced:?}");
        return Ok(ExitCode::from(EXIT_INVALID));
    }
    match direct {
        Verdict::Valid => {
            println!("VALID");
            Ok(ExitCode::SUCCESS)
        }
        Verdict::Invalid(v) => {
            println!("INVALID: {} and {} share {} descendants (allowed {})", v.first, v.second, v.shared, code.uncertainty());
            Ok(ExitCode::from(EXIT_INVALID))
        }
    }
}

fn info(path: &Path) -> Result<ExitCode> {
    let code = load_code(path)?;
    let roots: std::collections::BTreeSet<Word> = code.codewords().iter().map(root).collect::<Result<_, _>>()?;
    let summary = serde_json::json!({
        "q": code.params().q(),
        "k": code.params().k(),
        "n": code.n(),
        "N": code.uncertainty(),
        "t": code.t(),
        "size": code.len(),
        "log2_size": (code.len() as f64).log2(),
        "rate": code.rate(),
        "roots": roots.len(),
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(ExitCode::SUCCESS)
}

fn decode(code: &Path, reads: &Path) -> Result<ExitCode> {
    let code = load_code(code)?;
    let reads = read_words(code.params(), reads)?;
    if reads.is_empty() {
        bail!("no reads given");
    }
    let word = reconstruct(&code, &reads).context("decoding failed")?;
    println!("{word}");
    Ok(ExitCode::SUCCESS)
}

fn simulate(args: SimulateArgs) -> Result<ExitCode> {
    let code = load_code(&args.code)?;
    let report = simulate_reconstruction(&code, args.trials, args.seed)?;
    let mut value = serde_json::to_value(&report)?;
    value["success_rate"] = report.success_rate().into();
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(ExitCode::SUCCESS)
}

fn oracle(args: OracleArgs) -> Result<ExitCode> {
    let mut config = OracleConfig::default();
    if let Some(len) = args.max_root_len {
        config.max_root_len = len;
    }
    if let Some(samples) = args.samples {
        config.samples = samples;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let suites = match args.suite {
        Some(suite) => vec![suite],
        None => Suite::ALL.to_vec(),
    };
    for suite in suites {
        let outcome = run_suite(suite, &config)?;
        match outcome.counterexample {
            None => println!("{suite}: PASS ({} cases)", outcome.cases),
            Some(cx) => {
                println!("{suite}: FAIL after {} cases", outcome.cases);
                println!("counterexample: {cx}");
                return Ok(ExitCode::from(EXIT_ORACLE));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Descendant-expansion cap, overridable through `TANDEM_NODE_CAP`.
fn node_cap() -> Result<usize> {
    match std::env::var("TANDEM_NODE_CAP") {
        Ok(value) => value.trim().parse().with_context(|| format!("TANDEM_NODE_CAP={value:?} is not a count")),
        Err(_) => Ok(DEFAULT_NODE_CAP),
    }
}

fn load_code(path: &Path) -> Result<UtrCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    UtrCode::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_words(params: DupParams, path: &Path) -> Result<Vec<Word>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty())
        .map(|line| Word::parse(params, line).with_context(|| format!("in {}", path.display())))
        .collect()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}
