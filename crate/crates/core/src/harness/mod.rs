//! Experiment orchestration: configs, datasets, difficulty levels, run matrices, reports, and the CLI.

pub mod bucket;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod experiment;
pub mod report;

pub use config::{AdvisorConfig, AdvisorKind, ExperimentConfig, Selection};
pub use experiment::{run_experiment, Outcome};
