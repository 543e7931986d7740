//! `sphvar`: command-line front end for the spherical variation toolkit.
//!
//! Exit codes: 0 success, 1 a checked assertion failed, 2 usage or input
//! error. `SPHVAR_THREADS` sets the worker thread count.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sphvar::counterexamples::ExampleKind;

use crate::config::Exact;

#[derive(Parser, Debug)]
#[command(name = "sphvar", version, about = "Variation norms of spherical means: regions, operators, counterexamples, sparse forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render the type-set polygon for (d, r) as SVG and JSON.
    Region(RegionArgs),
    /// Classify the mapping property of V_r at (1/p, 1/q).
    Classify(ClassifyArgs),
    /// r-variation of a sampled path read from CSV.
    Variation(VariationArgs),
    /// Operator-norm probe over dyadic frequency pieces (JSON config).
    Operator(OperatorArgs),
    /// Counterexample scaling run: CSV (j, ratio) and a JSON report.
    Counterexample(CounterexampleArgs),
    /// Sparse-family checks: verification, domination stability, sharpness.
    SparseCheck(SparseArgs),
}

fn exponent(s: &str) -> Result<f64, String> {
    sphvar::serde_exponent::parse(s)
}

fn kind(s: &str) -> Result<ExampleKind, String> {
    s.parse().map_err(|e: sphvar::Error| e.to_string())
}

#[derive(Args, Debug)]
struct RegionArgs {
    #[arg(long)]
    d: Option<u32>,
    /// Exact exponent: integer, decimal, `a/b` or `inf`.
    #[arg(long)]
    r: Option<Exact>,
    #[arg(long, conflicts_with_all = ["d", "r"])]
    config: Option<PathBuf>,
    /// Write the SVG figure here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the JSON description here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    r: Option<Exact>,
    #[arg(long, value_parser = exponent)]
    p: Option<f64>,
    #[arg(long, value_parser = exponent)]
    q: Option<f64>,
    #[arg(long, conflicts_with_all = ["d", "r", "p", "q"])]
    config: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VariationArgs {
    /// CSV of real samples (one row or one column; a header line is skipped).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Inline samples, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "input")]
    values: Option<Vec<f64>>,
    #[arg(long, value_parser = exponent)]
    r: Option<f64>,
    #[arg(long, conflicts_with_all = ["input", "values", "r"])]
    config: Option<PathBuf>,
    /// Decimal places printed on stdout.
    #[arg(long, default_value_t = 7)]
    digits: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OperatorArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CounterexampleArgs {
    /// stein, shell0, knapp, disks, knapp-plates or alternating-shells.
    #[arg(long, value_parser = kind)]
    kind: Option<ExampleKind>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, value_parser = exponent)]
    p: Option<f64>,
    #[arg(long, value_parser = exponent)]
    q: Option<f64>,
    #[arg(long, value_parser = exponent)]
    r: Option<f64>,
    #[arg(long)]
    jmin: Option<u32>,
    #[arg(long)]
    jmax: Option<u32>,
    /// Time samples on [1, 2] (default max(129, 2^{j+5}+1)).
    #[arg(long = "M")]
    samples: Option<usize>,
    #[arg(long, conflicts_with_all = ["kind", "d", "p", "q", "r", "jmin", "jmax", "samples"])]
    config: Option<PathBuf>,
    /// Write the CSV here (stdout then carries the JSON report).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SparseArgs {
    /// Only verify this family file (JSON).
    #[arg(long)]
    family: Option<PathBuf>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, value_parser = exponent)]
    r: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    random_pairs: Option<usize>,
    /// Cells per side of the refined grids, comma separated.
    #[arg(long, value_delimiter = ',')]
    grids: Option<Vec<usize>>,
    #[arg(long, conflicts_with_all = ["family", "d", "r", "seed", "pairs", "random_pairs", "grids"])]
    config: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

/// How a command ended when not successfully.
#[derive(Debug)]
pub enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 1; the report has been written.
    Check(String),
}

impl From<sphvar::Error> for Failure {
    fn from(e: sphvar::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("SPHVAR_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| Failure::Usage(format!("SPHVAR_THREADS={v:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot start {n} threads: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Region(a) => commands::region(a),
        Command::Classify(a) => commands::classify(a),
        Command::Variation(a) => commands::variation(a),
        Command::Operator(a) => commands::operator(a),
        Command::Counterexample(a) => commands::counterexample(a),
        Command::SparseCheck(a) => commands::sparse_check(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
