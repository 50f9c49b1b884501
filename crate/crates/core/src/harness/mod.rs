//! Experiment outputs: per-generation CSVs, sweep summaries, SVG charts and
//! champion genome files.

mod champion;
mod chart;
mod report;
mod sweep;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::error::{ConfigError, ParseError};

pub use champion::{read_champion, write_champion, ChampionFile};
pub use chart::{emit_line_chart, render_line_chart};
pub use report::{generation_csv, quantize, write_generation_csv, GENERATION_HEADER};
pub use sweep::{
    cell_stem, first_spike_generation, median, run_sweep, runs_csv, summarize_run, summary_csv, write_runs_csv,
    write_sweep_summary,
    PopulationSummary, RunSummary, SweepReport, SweepSpec, RUNS_HEADER, SUMMARY_HEADER,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Csv { path: PathBuf, message: String },
    #[error("{}: no column named `{column}`", path.display())]
    MissingColumn { path: PathBuf, column: String },
    #[error("{}: no data rows to plot", path.display())]
    EmptyData { path: PathBuf },
    #[error("malformed champion file {}: {source}", path.display())]
    Champion {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
}

impl HarnessError {
    /// Process exit status: 2 for bad configuration or input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Write { .. } => 1,
            _ => 2,
        }
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), HarnessError> {
    let write_err = |source| HarnessError::Write {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(write_err)?;
    }
    std::fs::write(path, contents).map_err(write_err)
}
