//! Command-line driver: experiment files, built-in scenarios, run directories
//! and plot data.
//!
//! ```text
//! satflow run <config> [--out DIR] [--check {strict|report}]
//! satflow plotdata <manifest>
//! ```
//!
//! Exit status is 0 when every check passes, 1 when a check fails under
//! `--check strict`, 2 for usage, configuration or output errors and 3 when a
//! solver stage fails. `SATFLOW_THREADS` caps the worker pool.

mod config;
mod experiments;
mod manifest;
mod plotdata;
pub mod scenario;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use config::{DataSpec, Experiment, ExperimentConfig, LadderEntry, Scenario};
pub use experiments::Outcome;
pub use manifest::{Check, CheckMode, RunManifest, MANIFEST_NAME};
pub use plotdata::emit_plotdata;

pub const CONFIG_ECHO: &str = "config.toml";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("output: {0}")]
    Output(String),
    #[error("solver failure in {0}")]
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Output(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "satflow", version, about = "Elliptic-parabolic free boundary experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Output directory; defaults to `out` in the config or `<config stem>-out`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CheckMode::Strict)]
        check: CheckMode,
    },
    /// Write gnuplot data files for a finished run.
    Plotdata { manifest: PathBuf },
}

/// Runs one experiment and writes its directory. Check failures are recorded
/// in the manifest, not returned as errors.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path, check: CheckMode) -> Result<RunManifest, CliError> {
    let experiment = cfg.experiment()?;
    let outcome = match experiment {
        Experiment::Simulate => experiments::simulate(cfg)?,
        Experiment::RegularitySweep => experiments::regularity_sweep(cfg)?,
        Experiment::Barriers => experiments::barriers(cfg)?,
        Experiment::Optimality => experiments::optimality(cfg)?,
    };
    prepare_dir(out_dir)?;
    let mut manifest = RunManifest {
        scenario: cfg.scenario.clone(),
        experiment: experiment.to_string(),
        check_mode: check,
        out_dir: out_dir.to_path_buf(),
        timings: outcome.timings,
        files: Vec::new(),
        checks: outcome.checks,
    };
    let write = |name: &str, text: &str| {
        std::fs::write(out_dir.join(name), text).map_err(|e| CliError::Output(format!("{name}: {e}")))
    };
    write(CONFIG_ECHO, &cfg.to_text())?;
    manifest.record_file(CONFIG_ECHO);
    for (name, text) in &outcome.files {
        write(name, text)?;
        manifest.record_file(name);
    }
    manifest.record_file(MANIFEST_NAME);
    manifest.write()?;
    Ok(manifest)
}

// A directory holding an earlier run is cleared of that run's files; any other
// non-empty directory is refused.
fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    let fail = |e: std::io::Error| CliError::Output(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(fail)?;
    let previous = dir.join(MANIFEST_NAME);
    if previous.exists() {
        let old = RunManifest::load(&previous)?;
        for f in &old.files {
            let p = dir.join(f);
            if p.exists() {
                std::fs::remove_file(&p).map_err(fail)?;
            }
        }
    }
    if std::fs::read_dir(dir).map_err(fail)?.next().is_some() {
        return Err(CliError::Output(format!(
            "{} holds files that do not belong to a previous run",
            dir.display()
        )));
    }
    Ok(())
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("SATFLOW_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("SATFLOW_THREADS = `{v}` is not a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Usage(e.to_string()))
}

fn default_out(config: &Path, cfg: &ExperimentConfig) -> PathBuf {
    if let Some(o) = &cfg.out {
        return cfg.resolve(o);
    }
    let stem = config.file_stem().and_then(|s| s.to_str()).unwrap_or("satflow");
    PathBuf::from(format!("{stem}-out"))
}

/// Executes a parsed command line and returns the process exit status.
pub fn execute(cli: Cli) -> i32 {
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("satflow: {e}");
            return e.exit_code();
        }
    };
    let result: Result<i32, CliError> = pool.install(|| match cli.command {
        Command::Run { config, out, check } => {
            let cfg = ExperimentConfig::load(&config)?;
            let dir = out.unwrap_or_else(|| default_out(&config, &cfg));
            let m = run(&cfg, &dir, check)?;
            for c in m.checks.iter().filter(|c| !c.passed) {
                eprintln!("check failed: {} ({})", c.name, c.detail);
            }
            println!("{}", m.path().display());
            Ok(if m.passed() || check == CheckMode::Report { 0 } else { 1 })
        }
        Command::Plotdata { manifest } => {
            for name in emit_plotdata(&manifest)? {
                println!("{name}");
            }
            Ok(0)
        }
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("satflow: {e}");
            e.exit_code()
        }
    }
}

/// Entry point of the binary.
pub fn main_entry() -> i32 {
    execute(Cli::parse())
}
