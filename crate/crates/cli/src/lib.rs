//! Experiment runner: configures, executes and serializes simulation experiments as tables.

mod error;
mod experiments;
pub mod params;
pub mod table;

pub use error::{CliError, Result};
pub use experiments::{list_experiments, Experiment};
pub use params::{ParamKind, ParamSpec};
pub use table::{Meta, ResultTable, Value};

use params::Params;
use std::path::PathBuf;
use std::time::Instant;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentConfig {
    pub experiment: String,
    /// `key=value` overrides of the schema defaults.
    pub params: Vec<(String, String)>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Record wall time in the metadata (makes output run-dependent).
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: &str) -> Self {
        Self { experiment: experiment.to_string(), ..Self::default() }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Runs the configured experiment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let exp = experiments::find(&cfg.experiment).ok_or_else(|| CliError::UnknownExperiment(cfg.experiment.clone()))?;
    let params = Params::resolve(exp.params, &cfg.params)?;
    let start = Instant::now();
    let (columns, rows) = exp.execute(&params, cfg.seed)?;
    let wall_ms = cfg.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    Ok(ResultTable {
        columns,
        rows,
        meta: Meta {
            experiment: exp.name.to_string(),
            params: params.echo(),
            seed: cfg.seed,
            version: VERSION.to_string(),
            wall_ms,
        },
    })
}

/// Encodes `table` in `format`.
pub fn write_table<W: std::io::Write>(table: &ResultTable, format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => table.write_csv(out),
        Format::Json => table.write_json(out),
    }
}

/// Runs the experiment and writes the result to `cfg.out`, or to `stdout` when unset.
pub fn run_and_write(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let table = run_experiment(cfg)?;
    match &cfg.out {
        Some(path) => {
            let file = std::io::BufWriter::new(std::fs::File::create(path)?);
            write_table(&table, cfg.format, file)?;
        }
        None => write_table(&table, cfg.format, std::io::stdout().lock())?,
    }
    Ok(table)
}
