//! One module per subcommand. Each returns `Result<(), CliError>` so the
//! binary can map outcomes onto exit codes: 0 success, 1 verification
//! failure, 2 usage/config/runtime error.

pub mod benchmark;
pub mod kernel;
pub mod pairplot;
pub mod predict;
pub mod train;
pub mod verify;

use std::path::Path;

use qgenml_core::pipeline::PreparedData;
use qgenml_core::{load_dataset, prepare, RawDataset, Result};

use crate::config::RunConfig;

/// Why the process is exiting non-zero.
#[derive(Debug)]
pub enum CliError {
    /// A verification check genuinely failed (exit 1).
    Verification(String),
    /// Bad usage, config, data, or I/O (exit 2).
    Failed(qgenml_core::Error),
}

impl From<qgenml_core::Error> for CliError {
    fn from(error: qgenml_core::Error) -> Self {
        CliError::Failed(error)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Verification(message) => write!(f, "verification failed: {message}"),
            CliError::Failed(error) => write!(f, "{error}"),
        }
    }
}

pub fn ensure_output_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|source| qgenml_core::Error::Io { path: dir.display().to_string(), source })
}

/// Loads the configured dataset and runs the preparation chain once.
pub fn load_and_prepare(config: &RunConfig) -> Result<(RawDataset, PreparedData)> {
    let dataset_config = config.dataset()?;
    let dataset = load_dataset(&dataset_config.path, dataset_config.format())?;
    let prepared = prepare(&dataset, &config.pipeline)?;
    Ok((dataset, prepared))
}
