//! Scenario runner behind the `fracvar` verification command.
//!
//! A scenario executes a family of residual measurements over one or more
//! grid refinement levels, emits machine-readable rows and judges them
//! against fixed per-tag thresholds. Identical configuration and seed give
//! byte-identical reports.

pub mod config;
pub mod report;
pub mod scenarios;

pub use config::{resolve, ConfigFile, Overrides, Scenario, ScenarioConfig};
pub use report::{render_report, verdict, write_report, ReportRow, Tag, Verdict};
pub use scenarios::run_scenario;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] fracvar::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
