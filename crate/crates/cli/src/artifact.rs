//! Serialized model artifacts: everything `predict` needs to go from raw
//! sequences to labels, in one JSON file.

use serde::{Deserialize, Serialize};
use std::path::Path;

use qgenml_core::pipeline::{AngleScaler, PcaModel};
use qgenml_core::{
    variational_predict, Error, PegasosModel, QsvcModel, Result, VariationalModel,
};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TrainedModel {
    Qsvc(QsvcModel),
    PegasosQsvc(PegasosModel),
    Variational(VariationalModel),
}

impl TrainedModel {
    /// Signed decision score for one scaled feature vector. For margin
    /// models this is the decision function; for variational models it is
    /// the parity expectation in [-1, 1].
    pub fn score(&self, x: &[f64]) -> Result<f64> {
        match self {
            TrainedModel::Qsvc(model) => {
                let row = model.kernel_row(x)?;
                model.decision(&row)
            }
            TrainedModel::PegasosQsvc(model) => {
                let row = model.kernel_row(x)?;
                model.decision(&row)
            }
            TrainedModel::Variational(model) => model.expectation(x),
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<i8> {
        match self {
            TrainedModel::Qsvc(model) => {
                let row = model.kernel_row(x)?;
                model.predict(&row)
            }
            TrainedModel::PegasosQsvc(model) => {
                let row = model.kernel_row(x)?;
                model.predict(&row)
            }
            TrainedModel::Variational(model) => variational_predict(model, x),
        }
    }

    pub fn converged(&self) -> bool {
        match self {
            TrainedModel::Qsvc(model) => model.converged,
            // Pegasos always runs its full step budget; there is no
            // convergence flag to report.
            TrainedModel::PegasosQsvc(_) => true,
            TrainedModel::Variational(model) => model.converged,
        }
    }
}

/// A trained classifier plus the fitted preprocessing that fed it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelArtifact {
    /// Display name, e.g. "QSVC".
    pub algorithm: String,
    /// Feature-map display name, e.g. "ZZFeatureMap".
    pub feature_map: String,
    pub kmer_k: usize,
    pub pca: PcaModel,
    pub scaler: AngleScaler,
    pub model: TrainedModel,
}

impl ModelArtifact {
    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text)
            .map_err(|source| Error::Io { path: path.display().to_string(), source })
    }

    pub fn load(path: &Path) -> Result<ModelArtifact> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        Ok(serde_json::from_str(&text)?)
    }
}
