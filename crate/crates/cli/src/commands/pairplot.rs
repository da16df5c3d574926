//! `pairplot-data`: the 4-dimensional PCA scores (before angle scaling)
//! with labels and split membership, ready for external plotting.

use std::io::Write as _;

use qgenml_core::pipeline::{
    load_dataset, pca_fit, pca_transform, stratified_split, stratified_subset, vectorize_kmers,
};
use qgenml_core::{Error, FeatureMatrix};

use crate::commands::{ensure_output_dir, CliError};
use crate::config::RunConfig;

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let dataset_config = config.dataset()?;
    let dataset = load_dataset(&dataset_config.path, dataset_config.format())?;
    let pipeline = &config.pipeline;
    pipeline.validate()?;

    // Mirror the preparation chain up to (but not including) angle scaling:
    // the scores are what a scatter plot should show.
    let working = match pipeline.subset_size {
        Some(size) if size < dataset.len() => {
            let indices = stratified_subset(&dataset.labels, size, pipeline.seed)?;
            dataset.select(&indices)
        }
        _ => dataset,
    };
    let features = vectorize_kmers(&working, pipeline.kmer_k)?;
    let (train_indices, test_indices) =
        stratified_split(&working.labels, pipeline.test_fraction, pipeline.seed)?;

    let train_raw = features.select_rows(&train_indices)?;
    let test_raw = features.select_rows(&test_indices)?;
    let pca = pca_fit(&train_raw)?;
    let train_scores = pca_transform(&pca, &train_raw)?;
    let test_scores = pca_transform(&pca, &test_raw)?;

    let mut out = String::from("pc1,pc2,pc3,pc4,label,split\n");
    let mut append = |scores: &FeatureMatrix, indices: &[usize], split: &str| {
        for (row, &index) in scores.iter_rows().zip(indices) {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{},{}\n",
                row[0], row[1], row[2], row[3], working.labels[index], split
            ));
        }
    };
    append(&train_scores, &train_indices, "train");
    append(&test_scores, &test_indices, "test");

    ensure_output_dir(&config.output_dir)?;
    let path = config.output_dir.join("pairplot.csv");
    let mut file = std::fs::File::create(&path)
        .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    file.write_all(out.as_bytes())
        .map_err(|source| Error::Io { path: path.display().to_string(), source })?;

    println!(
        "{} rows ({} train, {} test) written to {}",
        train_indices.len() + test_indices.len(),
        train_indices.len(),
        test_indices.len(),
        path.display()
    );
    Ok(())
}
