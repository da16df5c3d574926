//! `predict`: classify new sequences with a saved model artifact.

use std::io::Write;
use std::path::Path;

use qgenml_core::pipeline::transform_new;
use qgenml_core::{load_sequences_csv, Error, RawDataset};

use crate::artifact::ModelArtifact;
use crate::commands::CliError;

pub fn run(model_path: &Path, input_path: &Path, output_path: &Path) -> Result<(), CliError> {
    let artifact = ModelArtifact::load(model_path)?;
    let sequences = load_sequences_csv(input_path)?;

    let mut out = String::from("sequence,score,label\n");
    if !sequences.is_empty() {
        let dataset = RawDataset {
            labels: vec![0; sequences.len()],
            sequences,
            source: input_path.display().to_string(),
        };
        let features =
            transform_new(&artifact.pca, &artifact.scaler, &dataset, artifact.kmer_k)?;
        for (sequence, row) in dataset.sequences.iter().zip(features.iter_rows()) {
            let score = artifact.model.score(row)?;
            let label = (artifact.model.predict(row)? + 1) / 2;
            out.push_str(&format!("{sequence},{score:.6},{label}\n"));
        }
    }

    let mut file = std::fs::File::create(output_path)
        .map_err(|source| Error::Io { path: output_path.display().to_string(), source })?;
    file.write_all(out.as_bytes())
        .map_err(|source| Error::Io { path: output_path.display().to_string(), source })?;

    let n = out.lines().count() - 1;
    println!(
        "{n} prediction{} written to {}",
        if n == 1 { "" } else { "s" },
        output_path.display()
    );
    Ok(())
}
