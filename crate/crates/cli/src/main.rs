use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

/// Exact word-map probabilities, coset identities and p-adic torsion
/// criteria on finite quotient towers.
#[derive(Parser, Debug)]
#[command(name = "probid", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Per-level probability that a word evaluates to 1.
    Prob(ProbArgs),
    /// Search coset identities at the first level and lift them up the tower.
    Scan(ScanArgs),
    /// Conjugacy-class measure of an element along the tower.
    Ccmeasure(CcArgs),
    /// Fixed-point-free criterion for torsion candidates.
    TorsionCheck(TorsionArgs),
    /// Weierstrass preparation of a one-variable series.
    Weierstrass(SeriesArgs),
    /// Zeros of a series modulo p^k.
    Zerocount(ZeroArgs),
    /// Smallest graded component with a fixed vector of an endomorphism.
    Liefix(LieArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Input JSON file.
    #[arg(long)]
    pub spec: PathBuf,
    /// Output format; each command has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available parallelism; 1 runs sequentially).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ProbArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub word: String,
    /// Level range `a..b` (inclusive); overrides the spec's `levels`.
    #[arg(long)]
    pub levels: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Monte-Carlo samples for levels over the evaluation budget.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Maximum word evaluations per exact level.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub word: String,
    #[arg(long)]
    pub levels: Option<String>,
    /// Seed for sampled refutation searches.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct CcArgs {
    #[command(flatten)]
    pub common: Common,
    /// Element as a JSON integer list: `[u_1, …, u_n, j]` for semidirect
    /// specs, row-major entries for matrix specs.
    #[arg(long)]
    pub element: String,
    #[arg(long)]
    pub levels: Option<String>,
}

#[derive(Args, Debug)]
pub struct TorsionArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ZeroArgs {
    #[command(flatten)]
    pub common: Common,
    /// Range of k; defaults to `1..min(N, 3)`.
    #[arg(long)]
    pub levels: Option<String>,
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct LieArgs {
    #[command(flatten)]
    pub common: Common,
    /// Highest degree searched.
    #[arg(long, default_value_t = probid_core::lie::DEFAULT_MAX_DEGREE)]
    pub degree: u32,
}

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    /// A result is approximate or undecided (Monte-Carlo fallback, sampled
    /// refutation search, precision-limited verdict).
    Degraded,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(Outcome::Complete) => ExitCode::SUCCESS,
        Ok(Outcome::Degraded) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
