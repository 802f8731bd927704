//! Config-driven batch runs and report summaries behind the CLI.

pub mod config;
pub mod output;
pub mod suites;
pub mod summary;

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::scalar::Mode;

pub use config::{Constants, DPolicy, ExperimentConfig, Suite};
pub use output::{exit_status, read_csv, Counts, Row, Status, COLUMNS};
pub use suites::run_suite;
pub use summary::{summarize, FileSummary};

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

/// What a finished run wrote.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub rows: Vec<Row>,
    pub csv_path: PathBuf,
    pub json_path: PathBuf,
    pub status: i32,
}

/// Loads, overrides and validates a config. Any failure is [`Error::Config`].
pub fn prepare(config_path: &Path, opts: &RunOptions) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(config_path)?;
    if let Some(mode) = opts.mode {
        cfg.mode = mode;
    }
    if let Some(seed) = opts.seed {
        cfg.seed = Some(seed);
    }
    if let Some(out) = &opts.out {
        cfg.out = Some(out.clone());
    }
    if opts.workers == Some(0) {
        return Err(Error::Config("--workers must be at least 1".into()));
    }
    cfg.validate()
}

/// Runs the suite on a dedicated pool of `workers` threads (the global pool when `None`).
pub fn rows_with_workers(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<Vec<Row>> {
    match workers {
        None => Ok(run_suite(cfg)),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(w).build().map_err(|e| Error::Config(format!("worker pool: {e}")))?;
            Ok(pool.install(|| run_suite(cfg)))
        }
    }
}

/// Validates, runs and writes the CSV report and its JSON sidecar.
///
/// Nothing is written when the config is rejected.
pub fn run(config_path: &Path, opts: &RunOptions) -> Result<RunOutcome> {
    let cfg = prepare(config_path, opts)?;
    let rows = rows_with_workers(&cfg, opts.workers)?;
    let csv_path = cfg.out_path(config_path);
    let json_path = csv_path.with_extension("json");
    let io = |p: &Path, e: std::io::Error| Error::Config(format!("{}: {e}", p.display()));
    std::fs::write(&csv_path, output::csv_string(&rows)?).map_err(|e| io(&csv_path, e))?;
    std::fs::write(&json_path, output::sidecar_json(&cfg, &rows)?).map_err(|e| io(&json_path, e))?;
    let status = exit_status(&rows);
    Ok(RunOutcome { rows, csv_path, json_path, status })
}

/// `(name, description)` of every suite.
pub fn list_suites() -> Vec<(&'static str, &'static str)> {
    Suite::ALL.iter().map(|s| (s.name(), s.description())).collect()
}
