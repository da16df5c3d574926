//! `train`: fit one (feature map, algorithm) pair and save the model.

use std::path::Path;

use qgenml_core::Error;

use crate::commands::{ensure_output_dir, load_and_prepare, CliError};
use crate::config::RunConfig;
use crate::run::{map_key, run_cell, write_history_csv, KernelCache};

pub fn run(config: &RunConfig, show_timing: bool) -> Result<(), CliError> {
    if config.feature_maps.len() != 1 || config.algorithms.len() != 1 {
        return Err(CliError::Failed(Error::invalid(
            "config",
            format!(
                "train wants exactly one feature map and one algorithm, got {} and {}",
                config.feature_maps.len(),
                config.algorithms.len()
            ),
        )));
    }
    let map = &config.feature_maps[0];
    let algorithm = &config.algorithms[0];

    let (_, prepared) = load_and_prepare(config)?;
    ensure_output_dir(&config.output_dir)?;
    config.echo_to(&config.output_dir)?;

    let mut kernels = KernelCache::new(map, &prepared);
    let outcome = run_cell(map, algorithm, &prepared, &mut kernels, config.seed)?;

    let stem = format!("{}_{}", map_key(map.kind), algorithm.key());
    if let Some(history) = &outcome.history {
        let history_path = config.output_dir.join(format!("history_{stem}.csv"));
        write_history_csv(&history_path, history)?;
        println!("history written to {}", history_path.display());
    }

    let converged = outcome.converged;
    let train_accuracy = outcome.train_accuracy;
    let report = outcome.report.clone();
    let wall = outcome.wall_seconds;

    let model_path = config.output_dir.join(format!("model_{stem}.json"));
    let artifact = outcome.into_artifact(map, algorithm, config.pipeline.kmer_k, &prepared);
    artifact.save(&model_path)?;

    println!("feature map: {}", map.kind.display_name());
    println!("algorithm: {}", algorithm.display_name());
    println!("training accuracy: {train_accuracy:.4}");
    println!("test accuracy: {:.4}", report.accuracy);
    if show_timing {
        println!("wall time: {wall:.2} s");
    }
    println!("model written to {}", model_path.display());
    if !converged {
        println!(
            "warning: training stopped at the iteration limit without meeting \
             its convergence threshold; the saved model is the last iterate"
        );
    }
    Ok(())
}

/// Conventional artifact path for a (map, algorithm) pair, shared with the
/// benchmark command.
pub fn model_path(dir: &Path, map_key: &str, algo_key: &str) -> std::path::PathBuf {
    dir.join(format!("model_{map_key}_{algo_key}.json"))
}
