//! Library surface of the `qgenml` command-line tool: configuration
//! loading, model artifacts, the per-cell training engine, and the
//! subcommand implementations. The binary in `main.rs` is a thin argument
//! parser over these.

pub mod artifact;
pub mod commands;
pub mod config;
pub mod run;
pub mod table;

pub use artifact::{ModelArtifact, TrainedModel};
pub use commands::CliError;
pub use config::{AlgorithmConfig, DatasetConfig, RunConfig};
