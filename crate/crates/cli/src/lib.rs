//! Experiment runner: configuration, the runs x shots protocol with
//! median / MAD statistics, and JSON / CSV reports.

pub mod config;
pub mod error;
pub mod experiment;
pub mod report;
pub mod stats;

pub use config::{ExperimentConfig, StateSource};
pub use error::{CliError, Result};
pub use experiment::run_experiment;
pub use report::{emit_report, EstimateReport};
pub use stats::{shot_budget_hint, summarize};
