//! Terminal front end: argument parsing, seed resolution, and plain-text
//! reporting over the library.
//!
//! Exit codes: `0` success, `2` usage or parameter errors, `3` file system
//! errors, `4` malformed or rejected input matrices.

use std::env;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::io::{self, IoError, OutputFormat};
use crate::montecarlo::{chernoff_trials, run_sweep, ExperimentConfig, MonteCarloError};
use crate::signed::certify_balance;
use crate::trajectory::{run_trajectory, TrajectoryError};

/// Environment variable consulted for the sweep seed when `--seed` is absent.
pub const SEED_ENV: &str = "BANDWAGON_SEED";
/// Seed used when neither `--seed` nor the environment provides one.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{path}: {message}")]
    BadInput { path: PathBuf, message: String },
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
    #[error(transparent)]
    MonteCarlo(#[from] MonteCarloError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(e) if e.is_file_error() => 3,
            CliError::Io(_) => 4,
            CliError::BadInput { .. } => 4,
            CliError::Trajectory(_) => 4,
            CliError::MonteCarlo(MonteCarloError::Trajectory(_)) => 4,
            CliError::MonteCarlo(_) => 2,
        }
    }
}

/// Agent or topic counts: comma-separated values and `lo..hi` ranges,
/// inclusive at both ends, e.g. `1..10` or `3,9,20` or `1..4,9`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexList(pub Vec<usize>);

pub fn parse_index_list(text: &str) -> Result<IndexList, String> {
    let mut values = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            return Err(String::from("empty entry in count list"));
        }
        if let Some((lo, hi)) = piece.split_once("..") {
            let lo: usize = lo
                .trim()
                .parse()
                .map_err(|_| format!("invalid range start {:?}", lo.trim()))?;
            let hi: usize = hi
                .trim()
                .parse()
                .map_err(|_| format!("invalid range end {:?}", hi.trim()))?;
            if lo == 0 {
                return Err(String::from("counts must be at least 1"));
            }
            if hi < lo {
                return Err(format!("range {piece:?} is empty"));
            }
            values.extend(lo..=hi);
        } else {
            let v: usize = piece
                .parse()
                .map_err(|_| format!("invalid count {piece:?}"))?;
            if v == 0 {
                return Err(String::from("counts must be at least 1"));
            }
            values.push(v);
        }
    }
    Ok(IndexList(values))
}

#[derive(Parser, Debug)]
#[command(
    name = "bandwagon",
    version,
    about = "Signed opinion dynamics: simulate trajectories, certify balance, run Monte Carlo sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Run one trajectory from an opinion matrix given as CSV.
    Simulate {
        /// Opinion CSV: one row per agent, one column per topic.
        #[arg(long)]
        input: PathBuf,
        /// Maximum number of steps before giving up.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Opinion magnitude below which the state counts as vanished.
        #[arg(long, default_value_t = 1e-12)]
        zero_tol: f64,
        /// Print one line per step: step index, Lyapunov value, balance flag.
        #[arg(long)]
        trace: bool,
        /// Accept matrices with all-zero columns (dead topics).
        #[arg(long)]
        allow_zero_columns: bool,
    },
    /// Monte Carlo sweep over a grid of agent and topic counts.
    Sweep {
        /// Agent counts, e.g. `9,20` or `3..6`.
        #[arg(long, value_parser = parse_index_list)]
        agents: IndexList,
        /// Topic counts, e.g. `1..10`.
        #[arg(long, value_parser = parse_index_list)]
        topics: IndexList,
        /// Trials per (agents, topics) cell.
        #[arg(long, default_value_t = 3000)]
        trials: usize,
        /// Standard deviation of the Gaussian initial opinions.
        #[arg(long, default_value_t = 10.0)]
        std: f64,
        /// Base seed; falls back to BANDWAGON_SEED, then to 42.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; repeatable, format chosen by extension (.csv/.json/.svg).
        /// Without it the CSV goes to stdout.
        #[arg(long)]
        out: Vec<PathBuf>,
        /// Maximum number of steps per trajectory.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Opinion magnitude below which a trajectory counts as vanished.
        #[arg(long, default_value_t = 1e-12)]
        zero_tol: f64,
    },
    /// Decide whether an appraisal sign matrix is structurally balanced.
    BalanceCheck {
        /// Appraisal CSV: entries -1, 0, 1; symmetric with unit diagonal.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Print the trial count guaranteeing |estimate - p| <= epsilon with
    /// probability at least 1 - delta.
    Chernoff {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
    },
}

/// `--seed` flag, then the BANDWAGON_SEED environment variable, then 42.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match env::var(SEED_ENV) {
        Ok(text) => text.trim().parse::<u64>().map_err(|_| {
            CliError::Usage(format!(
                "invalid {SEED_ENV} value {text:?}: expected an unsigned integer"
            ))
        }),
        Err(env::VarError::NotPresent) => Ok(DEFAULT_SEED),
        Err(env::VarError::NotUnicode(_)) => Err(CliError::Usage(format!(
            "invalid {SEED_ENV} value: not unicode"
        ))),
    }
}

fn join_i8(signs: &[i8]) -> String {
    signs
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn join_f64(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:?}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn run(command: CliCommand) -> Result<(), CliError> {
    match command {
        CliCommand::Simulate {
            input,
            budget,
            zero_tol,
            trace,
            allow_zero_columns,
        } => {
            let (y0, report) = io::read_opinion_csv(&input)?;
            if !report.zero_rows.is_empty() {
                return Err(CliError::BadInput {
                    path: input,
                    message: format!(
                        "agents {:?} have all-zero opinion rows; the dynamics are undefined",
                        report.zero_rows
                    ),
                });
            }
            if !report.zero_cols.is_empty() {
                if allow_zero_columns {
                    eprintln!(
                        "warning: topics {:?} are all-zero columns and will stay zero",
                        report.zero_cols
                    );
                } else {
                    return Err(CliError::BadInput {
                        path: input,
                        message: format!(
                            "topics {:?} are all-zero columns (pass --allow-zero-columns to proceed)",
                            report.zero_cols
                        ),
                    });
                }
            }
            let outcome = run_trajectory(&y0, budget, zero_tol, trace)?;
            println!("outcome: {}", outcome.kind());
            match outcome.hitting_time() {
                Some(t) => println!("hitting_time: {t}"),
                None => println!("hitting_time: none"),
            }
            println!("final_lyapunov: {:?}", outcome.final_lyapunov());
            if let Some(eq) = outcome.equilibrium() {
                println!("faction: {}", join_i8(eq.faction.signs()));
                println!("consensus: {}", join_f64(&eq.consensus_row));
            }
            if let Some(x) = outcome.final_appraisals() {
                println!("appraisals:");
                for row in x.rows() {
                    println!("{}", join_i8(row));
                }
            }
            if let Some(entries) = outcome.trace() {
                for e in entries {
                    println!(
                        "trace: step={} lyapunov={:?} balanced={}",
                        e.step, e.lyapunov, e.balanced
                    );
                }
            }
            Ok(())
        }
        CliCommand::Sweep {
            agents,
            topics,
            trials,
            std,
            seed,
            out,
            budget,
            zero_tol,
        } => {
            let seed = resolve_seed(seed)?;
            let config = ExperimentConfig {
                agent_counts: agents.0,
                topic_counts: topics.0,
                trials,
                opinion_std: std,
                seed,
                budget,
                zero_tol,
            };
            let cells = run_sweep(&config)?;
            if out.is_empty() {
                print!("{}", io::summary_csv(&cells));
                return Ok(());
            }
            for path in &out {
                let format = OutputFormat::from_path(path).ok_or_else(|| {
                    CliError::Usage(format!(
                        "cannot infer an output format from {}: expected .csv, .json or .svg",
                        path.display()
                    ))
                })?;
                io::write_outputs(&cells, format, path)?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        CliCommand::BalanceCheck { matrix } => {
            let x = io::read_appraisal_csv(&matrix)?;
            let certificate = certify_balance(&x);
            println!("balanced: {}", certificate.balanced);
            if let Some(faction) = certificate.faction {
                println!("faction: {}", join_i8(faction.signs()));
            }
            Ok(())
        }
        CliCommand::Chernoff { epsilon, delta } => {
            let trials = chernoff_trials(epsilon, delta)?;
            println!("{trials}");
            Ok(())
        }
    }
}

/// Parse `std::env` arguments, run, and translate errors into exit codes.
pub fn main_from_env() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version render with code 0, usage errors with code 2.
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
