//! Experiment runner: JSON configs in, CSV traces, JSON reports and SVG
//! plots out.

pub mod config;
pub mod experiment;
pub mod output;
pub mod suite;
pub mod svg;

pub use config::{ExperimentConfig, Location};
pub use experiment::{run_experiment, Bundle, RunSummary};
pub use suite::{run_suite, SuiteOutcome, SuiteTag};
