mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Simulator and checker for randomized ruling-set algorithms.
#[derive(Parser, Debug)]
#[command(name = "ruling-sim", version)]
struct Cli {
    /// Worker threads for multi-trial commands (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph and write it as an edge list.
    Gen(GenArgs),
    /// Run a pipeline on an edge-list graph and check its output.
    Run(RunArgs),
    /// Check a stored result against a graph.
    Verify(VerifyArgs),
    /// Monte-Carlo checks of the LMJ probability lemmas.
    Mc(McArgs),
    /// Round counts across a grid of graph sizes.
    Scale(ScaleArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyArg {
    Tree,
    Girth7,
    Path,
    Star,
    StarOfStars,
    Caterpillar,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    target_degree: Option<usize>,
    #[arg(long)]
    d1: Option<usize>,
    #[arg(long)]
    d2: Option<usize>,
    #[arg(long, default_value_t = 0)]
    d3: usize,
    #[arg(long)]
    spine: Option<usize>,
    #[arg(long)]
    legs: Option<usize>,
    #[arg(long)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Phase2Arg {
    SqrtDelta,
    DeltaStar34,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CleanupArg {
    #[value(name = "exact_mis")]
    ExactMis,
    #[value(name = "relaxed_ruling")]
    RelaxedRuling,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value = "tree2rs")]
    algorithm: String,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    c: usize,
    #[arg(long, default_value_t = 8)]
    c_tilde: usize,
    #[arg(long, default_value_t = 18)]
    mis_cutoff: usize,
    /// Exponent e in Δ_small = max(ceil(log2(n)^e), mis cutoff).
    #[arg(long, default_value_t = 3.0)]
    delta_small_exponent: f64,
    #[arg(long, value_enum, default_value = "sqrt-delta")]
    phase2_cutoff: Phase2Arg,
    #[arg(long, value_enum, default_value = "exact_mis")]
    cleanup: CleanupArg,
    #[arg(long)]
    relaxed_radius: Option<usize>,
    /// Result JSON; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Phase trace as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Checker reports as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Result JSON written by `run`.
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    beta: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LemmaArg {
    MinCdf,
    ConditionalProb,
    ConditionalDensity,
    Uncovered,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum InstanceArg {
    Star,
    StarOfStars,
}

#[derive(Args, Debug)]
struct McArgs {
    #[arg(long, value_enum)]
    lemma: LemmaArg,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    k: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    l: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "256")]
    delta: Vec<usize>,
    #[arg(long, value_enum, default_value = "star-of-stars")]
    instance: InstanceArg,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 3.0)]
    sigmas: f64,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ScaleFamilyArg {
    Tree,
    Girth7,
}

#[derive(Args, Debug)]
struct ScaleArgs {
    #[arg(long, value_enum)]
    family: ScaleFamilyArg,
    #[arg(long, default_value_t = 8)]
    target_degree: usize,
    /// `A..B` for the powers of two from A to B, or a comma list.
    #[arg(long)]
    n: String,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value = "tree2rs")]
    algorithm: String,
    #[arg(long, default_value_t = 18)]
    mis_cutoff: usize,
    #[arg(long, default_value_t = 3.0)]
    delta_small_exponent: f64,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn init_logging() {
    let level = match std::env::var("RULING_SIM_LOG").as_deref() {
        Ok("trace") => log::LevelFilter::Trace,
        Ok("info") => log::LevelFilter::Info,
        _ => log::LevelFilter::Off,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Run(a) => commands::run(a),
        Command::Verify(a) => commands::verify(a),
        Command::Mc(a) => commands::mc(a),
        Command::Scale(a) => commands::scale(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
