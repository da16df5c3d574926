//! Run configuration: one JSON file drives every subcommand.
//!
//! Defaults are filled in at load time and the *effective* configuration is
//! echoed into the output directory, so a run's provenance never depends on
//! remembering what the defaults were. The seed is mandatory — there is no
//! wall-clock fallback — and a `--seed` flag overrides the file value.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use qgenml_core::pipeline::PipelineConfig;
use qgenml_core::{DatasetFormat, Error, FeatureMapConfig, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub path: PathBuf,
    /// Omitted → guessed from the file extension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<DatasetFormat>,
}

impl DatasetConfig {
    pub fn format(&self) -> DatasetFormat {
        self.format.unwrap_or_else(|| DatasetFormat::from_path(&self.path))
    }
}

fn default_c() -> f64 {
    1.0
}
fn default_tol() -> f64 {
    1e-3
}
fn default_max_passes() -> usize {
    200
}
fn default_lambda() -> f64 {
    0.01
}
fn default_steps() -> usize {
    1000
}
fn default_lr() -> f64 {
    0.1
}
fn default_max_iters() -> usize {
    100
}
fn default_eps() -> f64 {
    1e-4
}

/// One classifier plus its hyperparameters. Serde fills module defaults for
/// anything omitted.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum AlgorithmConfig {
    Qsvc {
        #[serde(default = "default_c")]
        c: f64,
        #[serde(default = "default_tol")]
        tol: f64,
        #[serde(default = "default_max_passes")]
        max_passes: usize,
    },
    PegQsvc {
        #[serde(default = "default_lambda")]
        lambda: f64,
        #[serde(default = "default_steps")]
        steps: usize,
    },
    Vqc {
        #[serde(default = "default_lr")]
        lr: f64,
        #[serde(default = "default_max_iters")]
        max_iters: usize,
        #[serde(default = "default_eps")]
        eps: f64,
    },
    Qnn {
        #[serde(default = "default_lr")]
        lr: f64,
        #[serde(default = "default_max_iters")]
        max_iters: usize,
        #[serde(default = "default_eps")]
        eps: f64,
    },
}

impl AlgorithmConfig {
    /// Short machine name used in file names and artifacts.
    pub fn key(&self) -> &'static str {
        match self {
            AlgorithmConfig::Qsvc { .. } => "qsvc",
            AlgorithmConfig::PegQsvc { .. } => "peg_qsvc",
            AlgorithmConfig::Vqc { .. } => "vqc",
            AlgorithmConfig::Qnn { .. } => "qnn",
        }
    }

    /// Name used in the benchmark table rows.
    pub fn display_name(&self) -> &'static str {
        match self {
            AlgorithmConfig::Qsvc { .. } => "QSVC",
            AlgorithmConfig::PegQsvc { .. } => "PEG-QSVC",
            AlgorithmConfig::Vqc { .. } => "VQC",
            AlgorithmConfig::Qnn { .. } => "QNN",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            AlgorithmConfig::Qsvc { c, tol, max_passes } => {
                if !(c > 0.0) || !c.is_finite() {
                    return Err(Error::invalid("c", format!("must be positive, got {c}")));
                }
                if !(tol > 0.0) {
                    return Err(Error::invalid("tol", "must be positive"));
                }
                if max_passes == 0 {
                    return Err(Error::invalid("max_passes", "must be at least 1"));
                }
            }
            AlgorithmConfig::PegQsvc { lambda, steps } => {
                if !(lambda > 0.0) || !lambda.is_finite() {
                    return Err(Error::invalid("lambda", format!("must be positive, got {lambda}")));
                }
                if steps == 0 {
                    return Err(Error::invalid("steps", "must be at least 1"));
                }
            }
            AlgorithmConfig::Vqc { lr, max_iters, .. }
            | AlgorithmConfig::Qnn { lr, max_iters, .. } => {
                if !(lr >= 0.0) || !lr.is_finite() {
                    return Err(Error::invalid("lr", format!("must be >= 0, got {lr}")));
                }
                if max_iters == 0 {
                    return Err(Error::invalid("max_iters", "must be at least 1"));
                }
            }
        }
        Ok(())
    }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    /// Optional only for runs driven by inline `features` (the kernel
    /// subcommand); everything touching sequences requires it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<DatasetConfig>,
    #[serde(default)]
    pub pipeline: PipelineConfig,
    pub feature_maps: Vec<FeatureMapConfig>,
    pub algorithms: Vec<AlgorithmConfig>,
    /// Master seed; copied into the pipeline and derived per benchmark
    /// cell. Required — runs must be reproducible by construction.
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Inline feature rows for the kernel subcommand, bypassing the
    /// sequence pipeline (useful for tiny hand-picked examples).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<Vec<Vec<f64>>>,
}

impl RunConfig {
    pub fn load(path: &Path, seed_override: Option<u64>) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        let mut config: RunConfig = serde_json::from_str(&text)?;
        if let Some(seed) = seed_override {
            config.seed = seed;
        }
        config.pipeline.seed = config.seed;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.feature_maps.is_empty() {
            return Err(Error::invalid("feature_maps", "need at least one feature map"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid("algorithms", "need at least one algorithm"));
        }
        for map in &self.feature_maps {
            map.validate()?;
        }
        for algorithm in &self.algorithms {
            algorithm.validate()?;
        }
        self.pipeline.validate()?;
        if let Some(rows) = &self.features {
            if rows.is_empty() {
                return Err(Error::invalid("features", "inline feature list is empty"));
            }
            let width = rows[0].len();
            for (i, row) in rows.iter().enumerate() {
                if row.len() != width {
                    return Err(Error::RaggedRow { row: i, expected: width, got: row.len() });
                }
                if row.iter().any(|v| !v.is_finite()) {
                    return Err(Error::invalid(
                        "features",
                        format!("non-finite value in row {i}"),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn dataset(&self) -> Result<&DatasetConfig> {
        self.dataset
            .as_ref()
            .ok_or_else(|| Error::invalid("dataset", "this subcommand requires a dataset path"))
    }

    /// Deterministic per-cell seed for benchmark cell (map i, algorithm j).
    pub fn cell_seed(&self, map_index: usize, algorithm_index: usize) -> u64 {
        self.seed
            .wrapping_add(1_000_003u64.wrapping_mul(map_index as u64 + 1))
            .wrapping_add(7_919u64.wrapping_mul(algorithm_index as u64 + 1))
    }

    /// Writes the effective (defaults-filled) configuration next to the
    /// other outputs for provenance.
    pub fn echo_to(&self, dir: &Path) -> Result<()> {
        let path = dir.join("config_echo.json");
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, text)
            .map_err(|source| Error::Io { path: path.display().to_string(), source })
    }
}
