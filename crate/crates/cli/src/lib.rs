//! Command-line front end of the verification engine: loads a suite
//! configuration, runs the verifiers and sharpness probes on a worker pool,
//! and writes deterministic machine-readable reports.

pub mod config;
pub mod output;
pub mod suite;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use hgineq_core::catalog::{Status, VerifierId};
use hgineq_core::profiles;

pub use config::SuiteConfig;
pub use suite::{Scope, Suite, SuiteOutcome};

/// Exit status of a clean run.
pub const EXIT_OK: i32 = 0;
/// Exit status when a check failed, was inconclusive or raised an error.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status of configuration and usage errors.
pub const EXIT_CONFIG: i32 = 2;
/// Output directory used when neither `--out` nor the config sets one.
pub const DEFAULT_OUT_DIR: &str = "hgineq-out";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_FAILURE,
        }
    }
}

/// The message of an engine error, without the prefix of configuration
/// errors (the CLI adds its own).
pub(crate) fn detail(e: &hgineq_core::Error) -> String {
    match e {
        hgineq_core::Error::Config(msg) => msg.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug, Parser)]
#[command(name = "hgineq", version, about = "Numerical verification of Euler-operator inequalities on homogeneous groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by the running subcommands.
#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    /// Suite configuration (TOML, or JSON by extension); default: the bundled suite.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed overriding the configuration.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (0: all cores).
    #[arg(long, env = "HGINEQ_JOBS")]
    pub jobs: Option<usize>,
    /// Relative tolerance of identities, overriding the configuration.
    #[arg(long)]
    pub tol_identity: Option<f64>,
    /// Grid size N of the built-in profiles, overriding the configuration.
    #[arg(long)]
    pub grid_n: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suite and the sharpness probes.
    Verify(RunArgs),
    /// Run only the sharpness probes of the suite.
    Sharpness(RunArgs),
    /// Print the statement, constant and parameters of a verifier.
    Describe {
        /// Verifier id (see `list`).
        id: String,
    },
    /// List verifier ids, built-in profiles and extremizer families.
    List,
}

/// Loads the configuration and applies the command-line overrides.
pub fn resolve_config(args: &RunArgs) -> Result<SuiteConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => SuiteConfig::load(path)?,
        None => SuiteConfig::bundled(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(tol) = args.tol_identity {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::config(format!("--tol-identity: must be positive, got {tol}")));
        }
        config.tolerances.identity_rel = tol;
    }
    if let Some(n) = args.grid_n {
        config.grid.n = n;
    }
    Ok(config)
}

fn run(args: &RunArgs, scope: Scope) -> Result<i32, CliError> {
    let config = resolve_config(args)?;
    let out_dir = args.out.clone().or_else(|| config.output.dir.clone()).unwrap_or_else(|| DEFAULT_OUT_DIR.into());
    let suite = Suite::new(config)?;
    let jobs = args.jobs.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Runtime(format!("cannot start the worker pool: {e}")))?;
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let outcome = pool.install(|| suite.run(scope));
    let metadata = output::Metadata {
        tool_version: env!("CARGO_PKG_VERSION"),
        schema_version: output::SCHEMA_VERSION,
        started_unix_s: started,
        elapsed_s: clock.elapsed().as_secs_f64(),
        jobs: pool.current_num_threads(),
        seed: suite.config().seed,
        cells: suite.len(),
        passed: outcome.count(Status::Pass),
        failed: outcome.count(Status::Fail),
        inconclusive: outcome.count(Status::Inconclusive),
        errors: outcome.errors.clone(),
        sharpness_failures: outcome.sharpness_failures(),
    };
    output::write_outputs(&out_dir, &outcome, &metadata)?;
    for r in outcome.reports.iter().filter(|r| r.status != Status::Pass) {
        eprintln!("{:?}: {} on {} ({}) {:?}", r.status, r.theorem_id, r.group, r.profile, r.parameters);
    }
    for (cell, e) in &outcome.errors {
        eprintln!("error: {cell}: {e}");
    }
    for f in &metadata.sharpness_failures {
        eprintln!("sharpness: {f}");
    }
    println!(
        "{} reports: {} pass, {} fail, {} inconclusive; {} ratio curves, {} optimizations, {} decompositions; {} errors → {}",
        outcome.reports.len(),
        metadata.passed,
        metadata.failed,
        metadata.inconclusive,
        outcome.curves.len(),
        outcome.optima.len(),
        outcome.asymptotics.len(),
        outcome.errors.len(),
        out_dir.display()
    );
    Ok(outcome.exit_code())
}

fn list() -> String {
    let mut s = String::from("verifiers:\n");
    for id in VerifierId::ALL {
        s.push_str(&format!("  {id}\n"));
    }
    s.push_str("profiles:\n");
    for name in profiles::all_names() {
        s.push_str(&format!("  {name}\n"));
    }
    s.push_str("families:\n  power_cutoff\n  log_power_cutoff\n  slz_fl\n");
    s
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Verify(args) => run(args, Scope::All),
        Command::Sharpness(args) => run(args, Scope::Sharpness),
        Command::Describe { id } => id
            .parse::<VerifierId>()
            .map(|v| {
                println!("{}", v.describe());
                EXIT_OK
            })
            .map_err(|e| CliError::config(detail(&e))),
        Command::List => {
            print!("{}", list());
            Ok(EXIT_OK)
        }
    };
    result.unwrap_or_else(|e| {
        eprintln!("{e}");
        e.exit_code()
    })
}
