//! Shared train-and-evaluate machinery behind the `train` and `benchmark`
//! subcommands: one (feature map, algorithm) pair in, a trained artifact
//! plus its evaluation out.

use std::time::Instant;

use qgenml_core::pipeline::PreparedData;
use qgenml_core::{
    confusion, cross_gram, gram_matrix, metrics, train_pegasos, train_qsvc, train_variational,
    AnsatzConfig, FeatureMapConfig, FeatureMapKind, FeatureMatrix, KernelMatrix, MetricsReport,
    PegasosParams, Preset, QsvcParams, Result, TrainParams,
};

use crate::artifact::{ModelArtifact, TrainedModel};
use crate::config::AlgorithmConfig;

/// Short lowercase token for file names: "z", "zz", "pauli".
pub fn map_key(kind: FeatureMapKind) -> &'static str {
    match kind {
        FeatureMapKind::Z => "z",
        FeatureMapKind::Zz => "zz",
        FeatureMapKind::Pauli => "pauli",
    }
}

/// Gram matrices for one feature map, built on first use so purely
/// variational runs never pay for them. Both kernel classifiers share the
/// same matrices.
pub struct KernelCache<'a> {
    map: &'a FeatureMapConfig,
    prepared: &'a PreparedData,
    train_gram: Option<KernelMatrix>,
    test_cross: Option<FeatureMatrix>,
}

impl<'a> KernelCache<'a> {
    pub fn new(map: &'a FeatureMapConfig, prepared: &'a PreparedData) -> Self {
        KernelCache { map, prepared, train_gram: None, test_cross: None }
    }

    pub fn train_gram(&mut self) -> Result<&KernelMatrix> {
        if self.train_gram.is_none() {
            self.train_gram = Some(gram_matrix(self.map, &self.prepared.train)?);
        }
        Ok(self.train_gram.as_ref().unwrap())
    }

    pub fn test_cross(&mut self) -> Result<&FeatureMatrix> {
        if self.test_cross.is_none() {
            self.test_cross =
                Some(cross_gram(self.map, &self.prepared.test, &self.prepared.train)?);
        }
        Ok(self.test_cross.as_ref().unwrap())
    }
}

/// Everything a finished cell reports.
pub struct CellOutcome {
    pub model: TrainedModel,
    pub train_accuracy: f64,
    pub report: MetricsReport,
    /// (iteration, objective) curve; only variational models have one.
    pub history: Option<Vec<(usize, f64)>>,
    pub converged: bool,
    pub wall_seconds: f64,
}

impl CellOutcome {
    pub fn into_artifact(self, map: &FeatureMapConfig, algorithm: &AlgorithmConfig, kmer_k: usize, prepared: &PreparedData) -> ModelArtifact {
        ModelArtifact {
            algorithm: algorithm.display_name().to_string(),
            feature_map: map.kind.display_name().to_string(),
            kmer_k,
            pca: prepared.pca.clone(),
            scaler: prepared.scaler.clone(),
            model: self.model,
        }
    }
}

fn accuracy(predictions: &[i8], labels: &[i8]) -> f64 {
    let hits = predictions.iter().zip(labels).filter(|(p, l)| p == l).count();
    hits as f64 / labels.len() as f64
}

fn evaluate_scores(
    train_scores: &[f64],
    test_scores: &[f64],
    prepared: &PreparedData,
) -> Result<(f64, MetricsReport)> {
    let train_predictions: Vec<i8> =
        train_scores.iter().map(|&s| if s >= 0.0 { 1 } else { -1 }).collect();
    let test_predictions: Vec<i8> =
        test_scores.iter().map(|&s| if s >= 0.0 { 1 } else { -1 }).collect();

    let train_accuracy = accuracy(&train_predictions, &prepared.train_labels);
    let counts = confusion(&test_predictions, &prepared.test_labels)?;
    let report = metrics(&counts, Some((test_scores, &prepared.test_labels)))?;
    Ok((train_accuracy, report))
}

/// Trains one (map, algorithm) cell and evaluates it on the held-out rows.
///
/// `seed` feeds the trainer only; the split inside `prepared` is fixed by
/// the caller so every cell sees identical data.
pub fn run_cell(
    map: &FeatureMapConfig,
    algorithm: &AlgorithmConfig,
    prepared: &PreparedData,
    kernels: &mut KernelCache,
    seed: u64,
) -> Result<CellOutcome> {
    let started = Instant::now();
    let outcome = match *algorithm {
        AlgorithmConfig::Qsvc { c, tol, max_passes } => {
            let params = QsvcParams { c, tol, max_passes, seed };
            let gram = kernels.train_gram()?;
            let model = train_qsvc(
                gram,
                &prepared.train_labels,
                *map,
                prepared.train.clone(),
                &params,
            )?;
            let train_scores: Vec<f64> = (0..gram.size())
                .map(|i| model.decision(gram.row(i)))
                .collect::<Result<_>>()?;
            let cross = kernels.test_cross()?;
            let test_scores: Vec<f64> = cross
                .iter_rows()
                .map(|row| model.decision(row))
                .collect::<Result<_>>()?;
            let (train_accuracy, report) = evaluate_scores(&train_scores, &test_scores, prepared)?;
            let converged = model.converged;
            CellOutcome {
                model: TrainedModel::Qsvc(model),
                train_accuracy,
                report,
                history: None,
                converged,
                wall_seconds: 0.0,
            }
        }
        AlgorithmConfig::PegQsvc { lambda, steps } => {
            let params = PegasosParams { lambda, steps, seed };
            let gram = kernels.train_gram()?;
            let model = train_pegasos(
                gram,
                &prepared.train_labels,
                *map,
                prepared.train.clone(),
                &params,
            )?;
            let train_scores: Vec<f64> = (0..gram.size())
                .map(|i| model.decision(gram.row(i)))
                .collect::<Result<_>>()?;
            let cross = kernels.test_cross()?;
            let test_scores: Vec<f64> = cross
                .iter_rows()
                .map(|row| model.decision(row))
                .collect::<Result<_>>()?;
            let (train_accuracy, report) = evaluate_scores(&train_scores, &test_scores, prepared)?;
            CellOutcome {
                model: TrainedModel::PegasosQsvc(model),
                train_accuracy,
                report,
                history: None,
                converged: true,
                wall_seconds: 0.0,
            }
        }
        AlgorithmConfig::Vqc { lr, max_iters, eps } => {
            train_variational_cell(Preset::Vqc, map, prepared, lr, max_iters, eps, seed)?
        }
        AlgorithmConfig::Qnn { lr, max_iters, eps } => {
            train_variational_cell(Preset::Qnn, map, prepared, lr, max_iters, eps, seed)?
        }
    };
    Ok(CellOutcome { wall_seconds: started.elapsed().as_secs_f64(), ..outcome })
}

fn train_variational_cell(
    preset: Preset,
    map: &FeatureMapConfig,
    prepared: &PreparedData,
    lr: f64,
    max_iters: usize,
    eps: f64,
    seed: u64,
) -> Result<CellOutcome> {
    let ansatz = AnsatzConfig::for_preset(preset, map.n_qubits);
    let params = TrainParams { lr, max_iters, eps, seed };
    let model = train_variational(
        preset,
        *map,
        ansatz,
        &prepared.train,
        &prepared.train_labels,
        &params,
    )?;

    let train_scores: Vec<f64> = prepared
        .train
        .iter_rows()
        .map(|row| model.expectation(row))
        .collect::<Result<_>>()?;
    let test_scores: Vec<f64> = prepared
        .test
        .iter_rows()
        .map(|row| model.expectation(row))
        .collect::<Result<_>>()?;
    let (train_accuracy, report) = evaluate_scores(&train_scores, &test_scores, prepared)?;

    let history = model.history.clone();
    let converged = model.converged;
    Ok(CellOutcome {
        model: TrainedModel::Variational(model),
        train_accuracy,
        report,
        history: Some(history),
        converged,
        wall_seconds: 0.0,
    })
}

/// Writes an `iteration,objective` CSV next to the other run outputs.
pub fn write_history_csv(path: &std::path::Path, history: &[(usize, f64)]) -> Result<()> {
    use std::io::Write;
    let mut out = String::from("iteration,objective\n");
    for (iteration, objective) in history {
        out.push_str(&format!("{iteration},{objective:.16e}\n"));
    }
    let mut file = std::fs::File::create(path)
        .map_err(|source| qgenml_core::Error::Io { path: path.display().to_string(), source })?;
    file.write_all(out.as_bytes())
        .map_err(|source| qgenml_core::Error::Io { path: path.display().to_string(), source })
}
