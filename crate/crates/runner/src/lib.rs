//! Experiment runner for `birklab-core`: configuration files, CSV and JSON
//! output with provenance headers, and a deterministic parallel driver.

pub mod config;
pub mod error;
pub mod experiments;
pub mod formats;
pub mod output;

use std::path::{Path, PathBuf};

pub use config::{Experiment, ExperimentConfig};
pub use error::{RunError, RunResult};
pub use output::{Provenance, Table};

/// Settings that affect how a run executes but never what it outputs.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the available parallelism.
    pub threads: Option<usize>,
    /// Also write `<table>.json`.
    pub json: bool,
    /// Add a timestamp line to headers.
    pub stamp: bool,
}

pub struct RunReport {
    pub tables: Vec<Table>,
    pub provenance: Provenance,
    pub files: Vec<PathBuf>,
}

pub fn provenance(config: &ExperimentConfig, stamp: bool) -> Provenance {
    Provenance {
        tool: format!("birklab {}", env!("CARGO_PKG_VERSION")),
        experiment: config.experiment.kind().into(),
        config_sha256: config.hash(),
        seed: config.seed,
        generator: birklab_core::rng::GENERATOR.into(),
        stamp: stamp.then(|| {
            let t = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .unwrap_or_default();
            format!("{}", t.as_secs())
        }),
    }
}

/// Computes the tables of an experiment without writing anything.
pub fn compute(config: &ExperimentConfig, threads: Option<usize>) -> RunResult<Vec<Table>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| RunError::Resource(e.to_string()))?;
    experiments::execute(config, &pool)
}

/// Runs an experiment and writes its tables to `config.out` (or `.`).
pub fn run(config: &ExperimentConfig, opts: &RunOptions) -> RunResult<RunReport> {
    let tables = compute(config, opts.threads)?;
    let provenance = provenance(config, opts.stamp);
    let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let files = output::write_tables(Path::new(&dir), &tables, &provenance, opts.json)?;
    Ok(RunReport {
        tables,
        provenance,
        files,
    })
}
