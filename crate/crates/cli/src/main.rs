//! `hqc`: simulate, evaluate and verify couplings of random walks on the
//! hypercube.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on a
//! usage or configuration error.

mod commands;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used when neither `--seed` nor `HQC_SEED` is given.
pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Parser)]
#[command(
    name = "hqc",
    version,
    about = "Co-adapted couplings of random walks on the hypercube"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo tail of the coupling time under a strategy.
    Simulate(SimulateArgs),
    /// Exact tail and mean of the optimal coupling time.
    Exact(ExactArgs),
    /// Run named verification checks.
    Verify(VerifyArgs),
    /// Total-variation distance, coupling gap and mixing times.
    Tv(TvArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    /// Both walkers, bit by bit.
    Bit,
    /// The distance chain of the optimal coupling.
    Parity,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Dimension; inferred from --x/--y when those are given.
    #[arg(long)]
    pub n: Option<usize>,
    /// Start distance; y is x with its first k bits set.
    #[arg(long, conflicts_with_all = ["x", "y"])]
    pub k: Option<usize>,
    /// Start of the first walker as a 0/1 string.
    #[arg(long, requires = "y")]
    pub x: Option<String>,
    #[arg(long, requires = "x")]
    pub y: Option<String>,
    /// optimal, aldous, independent or file:<path>.
    #[arg(long, default_value = "optimal")]
    pub strategy: String,
    #[arg(long, value_enum, default_value = "bit")]
    pub engine: EngineKind,
    #[arg(long, default_value_t = 100_000)]
    pub replicas: u64,
    #[arg(long, env = "HQC_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "log:0.01:10:50")]
    pub t_grid: String,
    /// Censoring horizon of a single run.
    #[arg(long, default_value_t = 1e6)]
    pub t_max: f64,
    /// Compare the block sampler against the full rate matrix at each jump.
    #[arg(long)]
    pub cross_check: bool,
    #[arg(long)]
    pub parallelism: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    /// Distances: a list such as 1,2,5 with a:b for inclusive ranges.
    #[arg(long)]
    pub k: String,
    /// A single time.
    #[arg(long, conflicts_with = "t_grid")]
    pub t: Option<f64>,
    #[arg(long)]
    pub t_grid: Option<String>,
    /// Report the expected coupling time instead of the tail.
    #[arg(long, conflicts_with_all = ["t", "t_grid"])]
    pub mean: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated subset of identities, parity, bellman, polytope,
    /// dominance, lumping, marginals.
    #[arg(
        long,
        default_value = "identities,parity,bellman,polytope,dominance,lumping,marginals"
    )]
    pub checks: String,
    #[arg(long)]
    pub m_max: Option<usize>,
    /// Largest distance for the parity and Bellman checks.
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Dimension for the polytope, dominance, lumping and marginal checks.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub replicas: Option<u64>,
    #[arg(long, env = "HQC_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Time grid of the analytic checks.
    #[arg(long)]
    pub t_grid: Option<String>,
    /// Time horizon of the marginal check.
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub parallelism: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TvArgs {
    /// Dimension; defaults to the largest k.
    #[arg(long)]
    pub n: Option<usize>,
    /// Distances: a list such as 1,2,5 with a:b for inclusive ranges.
    #[arg(long)]
    pub k: String,
    #[arg(long, conflicts_with_all = ["t_grid", "level"])]
    pub t: Option<f64>,
    #[arg(long, conflicts_with = "level")]
    pub t_grid: Option<String>,
    /// Solve for the time at which tv (and the optimal tail) reach this level.
    #[arg(long)]
    pub level: Option<f64>,
    /// Emit only `t,tv` instead of the full gap table.
    #[arg(long)]
    pub curve: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// How a successful run ended.
pub enum Outcome {
    Done,
    ChecksFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(&a),
        Command::Exact(a) => commands::exact(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Tv(a) => commands::tv(&a),
    };
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
