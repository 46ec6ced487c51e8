//! Library side of the `hotstart` command-line tool: configuration,
//! input pipeline and subcommand implementations.

pub mod commands;
pub mod config;
pub mod error;
pub mod pipeline;

pub use config::{ExperimentConfig, Method, OrderingChoice, RawConfig};
pub use error::CliError;
