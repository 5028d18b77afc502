//! Reproducible experiment runner for `heatfield`.
//!
//! A run reads a flat config file ([`config`]), binds it to one
//! [`Experiment`], executes it and writes a CSV table plus a JSON manifest
//! next to it ([`output`]). Identical configs produce byte-identical CSVs,
//! whatever the worker count.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

pub use config::{parse_config, ConfigError, RawConfig};
pub use experiments::{execute, Experiment, ExperimentConfig, ExperimentParams, Report};
pub use output::{manifest_path, RunManifest, Summary, Table};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Library(#[from] heatfield::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
    #[error("check failed: {0}")]
    Check(String),
}

impl RunError {
    /// 1 for a config that does not parse or validate, 2 for anything that
    /// goes wrong afterwards.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            _ => 2,
        }
    }
}

/// Where a run wrote, or tried to write, its files.
#[derive(Debug)]
pub struct RunOutcome {
    pub csv: PathBuf,
    pub manifest: PathBuf,
    pub result: Result<Report, RunError>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        self.result.as_ref().map_or_else(RunError::exit_code, |_| 0)
    }
}

/// `<subcommand>.csv` in the working directory.
pub fn default_output(experiment: Experiment) -> PathBuf {
    PathBuf::from(format!("{}.csv", experiment.name()))
}

/// Runs a validated config on a pool of `workers` threads, or on the global
/// rayon pool when unset.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, RunError> {
    match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| RunError::Pool(e.to_string()))?
            .install(|| execute(cfg)),
        None => execute(cfg),
    }
}

fn write(path: &Path, contents: &[u8]) -> Result<(), RunError> {
    let io = |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(io)
}

/// Parses, validates and runs `config_path`, then writes the CSV (on success)
/// and the manifest (always). The output path is `out`, else the config's
/// `output` key, else [`default_output`].
pub fn run(experiment: Experiment, config_path: &Path, out: Option<&Path>) -> RunOutcome {
    let start = Instant::now();
    let raw = parse_config(config_path);
    let cfg = raw
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|raw| ExperimentConfig::from_raw(experiment, raw));
    let csv = out
        .map(Path::to_path_buf)
        .or_else(|| {
            cfg.as_ref()
                .ok()
                .and_then(|c| c.output.clone())
                .map(PathBuf::from)
        })
        .unwrap_or_else(|| default_output(experiment));

    let mut result = cfg
        .as_ref()
        .map_err(|e| RunError::Config(e.clone()))
        .and_then(|cfg| {
            let report = run_experiment(cfg)?;
            write(&csv, report.table.to_csv().as_bytes())?;
            match &report.failure {
                Some(msg) => Err(RunError::Check(msg.clone())),
                None => Ok(report),
            }
        });

    let (rows, estimates) = match &result {
        Ok(r) => (r.table.rows.len(), r.estimates.clone()),
        Err(_) => (0, Vec::new()),
    };
    let manifest = RunManifest {
        subcommand: experiment.name().to_string(),
        status: if result.is_ok() { "ok" } else { "error" },
        error: result.as_ref().err().map(ToString::to_string),
        exit_code: result.as_ref().map_or_else(RunError::exit_code, |_| 0),
        library_version: heatfield::VERSION,
        config_path: config_path.to_path_buf(),
        output: csv.clone(),
        config: raw.as_ref().map(RawConfig::echo).unwrap_or_default(),
        resolved: cfg.as_ref().map(|c| c.resolved.clone()).unwrap_or_default(),
        duration_seconds: start.elapsed().as_secs_f64(),
        rows,
        estimates,
    };
    let manifest_file = manifest_path(&csv);
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    if let Err(e) = write(&manifest_file, format!("{json}\n").as_bytes()) {
        if result.is_ok() {
            result = Err(e);
        }
    }
    RunOutcome {
        csv,
        manifest: manifest_file,
        result,
    }
}
