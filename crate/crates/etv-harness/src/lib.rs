//! Experiment harness: runs the design x problem x seed matrix, persists
//! per-run logs and a results table, and turns finished matrices into
//! confidence summaries, factorial effects and boxplot inputs.

pub mod analyze;
pub mod config;
pub mod runner;

pub use analyze::{analyze_results, AnalyzeReport};
pub use config::{Constants, ExperimentConfig};
pub use runner::{run_experiment, run_seed, RunSummary};
