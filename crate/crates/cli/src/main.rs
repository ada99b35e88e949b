//! `dcode`: colony search, baselines, experiments, allocation simulation and
//! prescription from the command line.
//!
//! Exit codes: 0 success, 1 usage, 2 configuration or input, 3 runtime
//! failure, 4 infeasible prescription.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "dcode", version, about = "Colony search with a dynamic efficiency controller")]
struct Cli {
    /// Worker threads for parallel ant construction (default: all cores;
    /// falls back to DCODE_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a TSPLIB instance with the colony solver.
    Solve(SolveArgs),
    /// Run one comparison algorithm on a TSP instance or a benchmark function.
    Baseline(BaselineArgs),
    /// Run a multi-seed experiment and write comparison tables.
    Bench(BenchArgs),
    /// Compare static and adaptive allocation on a generated scenario.
    Simulate(SimulateArgs),
    /// Pick the best feasible record of a dataset under constraints.
    Prescribe(PrescribeArgs),
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Disable the efficiency controller.
    #[arg(long)]
    pub no_de: bool,
    /// Restrict construction to cluster candidate lists with k clusters.
    #[arg(long)]
    pub clusters: Option<usize>,
    /// `name,cost` CSV of best-known costs (default: best_known.csv next to
    /// the instance, if present).
    #[arg(long)]
    pub best_known: Option<PathBuf>,
    #[arg(long, default_value = "dcode_out/solve")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct BaselineArgs {
    /// aco_classic, ga_tsp, tgd, dgd, es, pso or de_rand1bin (default: the
    /// config's baseline.algorithm).
    #[arg(long)]
    pub algorithm: Option<String>,
    /// TSP instance; without it the config's continuous objective is used.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// sphere, rosenbrock or rastrigin.
    #[arg(long)]
    pub objective: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "dcode_out/baseline")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Configuration document with an `experiment` section.
    #[arg(long)]
    pub spec: PathBuf,
    /// Output directory (default: experiment.output_dir, else
    /// dcode_out/bench).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// high_demand, emergency or scalability.
    #[arg(long)]
    pub scenario: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, conflicts_with = "de_only")]
    pub static_only: bool,
    #[arg(long)]
    pub de_only: bool,
    #[arg(long, default_value = "dcode_out/simulate")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct PrescribeArgs {
    /// CSV with feature columns and an objective column `f`.
    #[arg(long)]
    pub data: PathBuf,
    /// `<feature><op><value>` with op one of >=, <=, ==, !=, >, <, =.
    #[arg(long = "constraint")]
    pub constraints: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(error::EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Solve(a) => commands::solve(&a),
        Command::Baseline(a) => commands::baseline(&a),
        Command::Bench(a) => commands::bench(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Prescribe(a) => commands::prescribe(&a),
    }
}

fn configure_threads(flag: Option<usize>) -> CliResult<()> {
    let threads = match flag {
        Some(n) => Some(n),
        None => match std::env::var("DCODE_THREADS") {
            Ok(v) if !v.trim().is_empty() => Some(
                v.trim()
                    .parse()
                    .map_err(|_| CliError::usage(format!("DCODE_THREADS must be a positive integer, got `{v}`")))?,
            ),
            _ => None,
        },
    };
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::usage("--threads must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(CliError::runtime)?;
    }
    Ok(())
}
