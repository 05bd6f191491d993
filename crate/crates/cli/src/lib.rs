//! Experiment driver for `muskat-core`: JSON configuration, runs, sweeps,
//! verification suites and the files they write.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::{parse_config, ExperimentConfig};
pub use error::{CliError, Status};
