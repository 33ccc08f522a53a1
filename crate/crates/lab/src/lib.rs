//! Experiment runner on top of `ogplab-core`: flat configs, CSV tables,
//! polynomial, tensor and graph file formats, verification suites and the
//! `ogplab` command line.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod formats;
pub mod parallel;
pub mod runner;
pub mod table;
pub mod verify;

pub use config::{ExperimentConfig, Kind};
pub use error::{LabError, Result};
