//! `benchmark`: the full feature-map × algorithm grid on one shared split.
//!
//! Every cell sees identical train/test rows; only the trainer seed varies
//! (deterministically, derived from the master seed and the cell position).
//! A failing cell becomes a FAILED row instead of aborting the grid, so one
//! bad configuration can't hide the other results.

use serde::Serialize;
use std::io::Write as _;

use qgenml_core::Error;

use crate::commands::{ensure_output_dir, load_and_prepare, CliError};
use crate::config::RunConfig;
use crate::run::{map_key, run_cell, write_history_csv, KernelCache};
use crate::table::Table;

#[derive(Clone, Debug, Serialize)]
pub struct BenchmarkRow {
    pub feature_map: String,
    pub algorithm: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub train_accuracy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_accuracy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recall: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auroc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub artifact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub history: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Serialize)]
struct BenchmarkReport<'a> {
    seed: u64,
    train_rows: usize,
    test_rows: usize,
    results: &'a [BenchmarkRow],
}

fn number(value: Option<f64>) -> String {
    value.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"))
}

pub fn run(config: &RunConfig, show_timing: bool) -> Result<(), CliError> {
    let (_, prepared) = load_and_prepare(config)?;
    ensure_output_dir(&config.output_dir)?;
    config.echo_to(&config.output_dir)?;

    let mut rows: Vec<BenchmarkRow> = Vec::new();
    for (i, map) in config.feature_maps.iter().enumerate() {
        let mut kernels = KernelCache::new(map, &prepared);
        for (j, algorithm) in config.algorithms.iter().enumerate() {
            let seed = config.cell_seed(i, j);
            let stem = format!("{}_{}", map_key(map.kind), algorithm.key());
            let mut row = BenchmarkRow {
                feature_map: map.kind.display_name().to_string(),
                algorithm: algorithm.display_name().to_string(),
                status: "ok".to_string(),
                train_accuracy: None,
                test_accuracy: None,
                precision: None,
                recall: None,
                f1: None,
                auroc: None,
                converged: None,
                wall_seconds: None,
                artifact: None,
                history: None,
                error: None,
            };
            match run_cell(map, algorithm, &prepared, &mut kernels, seed) {
                Ok(outcome) => {
                    row.train_accuracy = Some(outcome.train_accuracy);
                    row.test_accuracy = Some(outcome.report.accuracy);
                    row.precision = Some(outcome.report.precision);
                    row.recall = Some(outcome.report.recall);
                    row.f1 = Some(outcome.report.f1);
                    row.auroc = outcome.report.auroc;
                    row.converged = Some(outcome.converged);
                    if show_timing {
                        row.wall_seconds = Some(outcome.wall_seconds);
                    }
                    if let Some(history) = &outcome.history {
                        let name = format!("history_{stem}.csv");
                        write_history_csv(&config.output_dir.join(&name), history)?;
                        row.history = Some(name);
                    }
                    let name = format!("model_{stem}.json");
                    let artifact =
                        outcome.into_artifact(map, algorithm, config.pipeline.kmer_k, &prepared);
                    artifact.save(&config.output_dir.join(&name))?;
                    row.artifact = Some(name);
                }
                Err(error) => {
                    row.status = "failed".to_string();
                    row.error = Some(error.to_string());
                }
            }
            rows.push(row);
        }
    }

    write_json(config, prepared.train.rows(), prepared.test.rows(), &rows)?;
    write_csv(config, &rows, show_timing)?;
    print_table(&rows, show_timing);

    let failures = rows.iter().filter(|r| r.status == "failed").count();
    if failures > 0 {
        println!("{failures} of {} cells failed; see benchmark.json for details", rows.len());
    }
    Ok(())
}

fn write_json(
    config: &RunConfig,
    train_rows: usize,
    test_rows: usize,
    rows: &[BenchmarkRow],
) -> Result<(), CliError> {
    let report = BenchmarkReport { seed: config.seed, train_rows, test_rows, results: rows };
    let path = config.output_dir.join("benchmark.json");
    let text = serde_json::to_string_pretty(&report).map_err(Error::from)?;
    std::fs::write(&path, text)
        .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    Ok(())
}

fn write_csv(config: &RunConfig, rows: &[BenchmarkRow], show_timing: bool) -> Result<(), CliError> {
    let path = config.output_dir.join("benchmark.csv");
    let mut out = String::from(
        "feature_map,algorithm,status,train_accuracy,test_accuracy,precision,recall,f1,auroc,converged",
    );
    if show_timing {
        out.push_str(",wall_seconds");
    }
    out.push_str(",artifact\n");

    let cell = |v: Option<f64>| v.map_or_else(String::new, |x| format!("{x:.6}"));
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}",
            row.feature_map,
            row.algorithm,
            row.status,
            cell(row.train_accuracy),
            cell(row.test_accuracy),
            cell(row.precision),
            cell(row.recall),
            cell(row.f1),
            cell(row.auroc),
            row.converged.map_or_else(String::new, |c| c.to_string()),
        ));
        if show_timing {
            out.push(',');
            out.push_str(&cell(row.wall_seconds));
        }
        out.push(',');
        out.push_str(row.artifact.as_deref().unwrap_or(""));
        out.push('\n');
    }

    let mut file = std::fs::File::create(&path)
        .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    file.write_all(out.as_bytes())
        .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    Ok(())
}

fn print_table(rows: &[BenchmarkRow], show_timing: bool) {
    let mut header = vec![
        "feature map",
        "algorithm",
        "train acc",
        "test acc",
        "precision",
        "recall",
        "f1",
        "auroc",
        "converged",
    ];
    if show_timing {
        header.push("time (s)");
    }
    let mut table = Table::new(&header);
    for row in rows {
        let mut cells = vec![row.feature_map.clone(), row.algorithm.clone()];
        if row.status == "failed" {
            cells.push("FAILED".to_string());
            for _ in 0..(header.len() - 3) {
                cells.push("-".to_string());
            }
        } else {
            cells.push(number(row.train_accuracy));
            cells.push(number(row.test_accuracy));
            cells.push(number(row.precision));
            cells.push(number(row.recall));
            cells.push(number(row.f1));
            cells.push(number(row.auroc));
            cells.push(row.converged.map_or_else(|| "-".into(), |c| c.to_string()));
            if show_timing {
                cells.push(number(row.wall_seconds));
            }
        }
        table.push_row(cells);
    }
    print!("{}", table.render());
    for row in rows.iter().filter(|r| r.status == "failed") {
        println!(
            "  {} / {}: {}",
            row.feature_map,
            row.algorithm,
            row.error.as_deref().unwrap_or("unknown error")
        );
    }
}
