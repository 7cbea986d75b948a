//! `agg`: fits, oracles, simulations, rate tables, hard instances, and
//! self-checks for penalized least-squares dictionary aggregation.
//!
//! Exit codes: 0 success (including fits that report `converged: false` —
//! that is data, not failure), 1 self-check failure, 2 malformed input
//! files, 3 invalid configuration. Errors print a single machine-parsable
//! line `error kind=<input|config|check|internal> msg="..."` to stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "agg",
    version,
    about = "Penalized least-squares dictionary aggregation"
)]
pub(crate) struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory all outputs are written into (created if missing).
    #[arg(long, global = true, default_value = "agg-out")]
    pub(crate) out: PathBuf,

    /// JSON config file (penalty spec for `fit`, experiment manifest for
    /// `simulate`).
    #[arg(long, global = true)]
    pub(crate) config: Option<PathBuf>,

    /// Seed override.
    #[arg(long, global = true)]
    pub(crate) seed: Option<u64>,

    /// Output format where both are supported.
    #[arg(long, global = true, value_parser = ["csv", "json"], default_value = "json")]
    pub(crate) format: String,

    /// Size of the worker thread pool (default: one per core).
    #[arg(long, global = true)]
    pub(crate) threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a penalized least-squares aggregate to design + target CSVs.
    Fit {
        /// Design CSV (header j0..j{M-1}, one row per design point).
        #[arg(long)]
        design: PathBuf,
        /// Targets CSV (header f,y).
        #[arg(long)]
        targets: PathBuf,
        /// Subset-enumeration budget for the exact hard-threshold scan.
        #[arg(long)]
        budget: Option<u128>,
        /// Refuse instead of falling back to greedy forward selection.
        #[arg(long)]
        no_greedy: bool,
        /// Convergence tolerance for the weighted-L1 solvers.
        #[arg(long)]
        tol: Option<f64>,
        /// Iteration cap for the weighted-L1 solvers.
        #[arg(long)]
        max_iters: Option<usize>,
    },
    /// Compute reference minimizers against the known truth column.
    Oracle {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        targets: PathBuf,
        /// Comma-separated subset of ms,c,l,grid.
        #[arg(long, default_value = "ms,c,l")]
        kinds: String,
        /// Grid denominator for the rational-coefficient oracle.
        #[arg(long, default_value_t = 8)]
        grid_m: usize,
        /// Duality-gap stop for the simplex oracle.
        #[arg(long, default_value_t = 1e-8)]
        gap_tol: f64,
        #[arg(long, default_value_t = 200_000)]
        max_iters: usize,
    },
    /// Run a Monte Carlo study from an experiment manifest (--config).
    Simulate,
    /// Tabulate the aggregation rate curves over n and M lists.
    Rates {
        /// Comma-separated sample sizes.
        #[arg(long)]
        n_list: String,
        /// Comma-separated dictionary sizes.
        #[arg(long)]
        m_list: String,
    },
    /// Generate a provably hard instance (and optionally evaluate an
    /// estimator on it).
    Hardness {
        /// Instance family: ms (disjoint blocks) or l (point masses).
        #[arg(long, value_parser = ["ms", "l"])]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Cardinality cap for coded truth sets.
        #[arg(long, default_value_t = agg_core::hardness::DEFAULT_TRUTH_BUDGET)]
        truth_budget: usize,
        /// Estimator to evaluate worst-case over the truth set.
        #[arg(long, value_parser = ["hard", "soft", "interpolate"])]
        eval: Option<String>,
        #[arg(long, default_value_t = 20)]
        reps: usize,
    },
    /// Run the bundled deterministic theory-check battery.
    Check {
        /// Corrupt a named constant to exercise the failure path.
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code(&err);
            let kind = match code {
                1 => "check",
                2 => "input",
                3 => "config",
                _ => "internal",
            };
            eprintln!("error kind={kind} msg={:?}", err.to_string());
            ExitCode::from(code)
        }
    }
}

/// Raised when a self-check fails; carries the failing check's name.
#[derive(Debug)]
pub(crate) struct CheckFailure(pub(crate) String);

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "check failed: {}", self.0)
    }
}

impl std::error::Error for CheckFailure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.is::<CheckFailure>() {
        return 1;
    }
    match err.downcast_ref::<agg_core::Error>() {
        Some(
            agg_core::Error::Parse(_)
            | agg_core::Error::Io(_)
            | agg_core::Error::DimensionMismatch(_)
            | agg_core::Error::InvalidInput(_),
        ) => 2,
        Some(
            agg_core::Error::Config(_)
            | agg_core::Error::Domain(_)
            | agg_core::Error::BudgetExceeded { .. }
            | agg_core::Error::Capacity(_)
            | agg_core::Error::Json(_),
        ) => 3,
        _ => {
            if err.is::<serde_json::Error>() {
                3
            } else {
                2
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    std::fs::create_dir_all(&cli.out)?;
    let threads = cli.threads;
    let body = || -> anyhow::Result<()> {
        match &cli.command {
            Command::Fit {
                design,
                targets,
                budget,
                no_greedy,
                tol,
                max_iters,
            } => commands::fit::run(&cli, design, targets, *budget, *no_greedy, *tol, *max_iters),
            Command::Oracle {
                design,
                targets,
                kinds,
                grid_m,
                gap_tol,
                max_iters,
            } => commands::oracle::run(&cli, design, targets, kinds, *grid_m, *gap_tol, *max_iters),
            Command::Simulate => commands::simulate::run(&cli),
            Command::Rates { n_list, m_list } => commands::rates::run(&cli, n_list, m_list),
            Command::Hardness {
                kind,
                n,
                m,
                sigma,
                truth_budget,
                eval,
                reps,
            } => commands::hardness::run(&cli, kind, *n, *m, *sigma, *truth_budget, eval, *reps),
            Command::Check { inject_fault } => commands::check::run(&cli, inject_fault.as_deref()),
        }
    };
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?
            .install(body),
        None => body(),
    }
}
