//! Command-line driver for the `hazsel-core` simulations: configuration
//! files, a multi-threaded Monte Carlo engine, and CSV / JSON / markdown
//! reports.

pub mod cli;
pub mod commands;
pub mod config;
pub mod engine;
pub mod error;
pub mod report;

pub use config::{EstimatorChoice, ExperimentConfig, OutputFormat};
pub use engine::Engine;
pub use error::{CliError, Result};
pub use report::{Cell, Report};
