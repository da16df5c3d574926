//! Variational quantum classifiers trained by parameter-shift gradient
//! descent.
//!
//! Both presets share one architecture and optimizer and differ only in
//! circuit depth: `Vqc` uses one entangled layer, `Qnn` uses three. A model
//! prepares U_ansatz(θ) · U_encode(x) |0…0⟩ and reads out the full Z-parity
//! expectation ⟨Z⊗…⊗Z⟩ ∈ [−1, 1], trained against ±1 labels with the
//! squared loss C(θ) = (1/N) Σ (y_i − ⟨O⟩_i)².
//!
//! The ansatz rotations use the half-angle convention, which makes the
//! ±π/2 parameter-shift rule exact: ∂⟨O⟩/∂θ_i = (⟨O⟩_{θ_i+π/2} −
//! ⟨O⟩_{θ_i−π/2}) / 2. Encoding circuits carry no trainable parameters, so
//! they are never shifted.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::feature_map::{encode, FeatureMapConfig};
use crate::feature_matrix::FeatureMatrix;
use crate::statevector::{
    expectation_parity_z, run_circuit, AngleConvention, Circuit, Gate, Statevector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Vqc,
    Qnn,
}

impl Preset {
    /// Entangled-layer count for the preset.
    pub fn layers(self) -> usize {
        match self {
            Preset::Vqc => 1,
            Preset::Qnn => 3,
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Preset::Vqc => "VQC",
            Preset::Qnn => "QNN",
        }
    }
}

/// Hardware-efficient ansatz: L+1 layers of per-qubit RY rotations with a
/// CNOT ring after each of the first L layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzConfig {
    pub n_qubits: usize,
    pub layers: usize,
}

impl AnsatzConfig {
    pub fn new(n_qubits: usize, layers: usize) -> Self {
        AnsatzConfig { n_qubits, layers }
    }

    pub fn for_preset(preset: Preset, n_qubits: usize) -> Self {
        AnsatzConfig { n_qubits, layers: preset.layers() }
    }

    /// Number of trainable angles: one RY per qubit per rotation layer.
    pub fn parameter_count(&self) -> usize {
        self.n_qubits * (self.layers + 1)
    }
}

/// Builds the ansatz circuit for a concrete parameter vector.
pub fn build_ansatz(config: &AnsatzConfig, theta: &[f64]) -> Result<Circuit> {
    if config.n_qubits == 0 {
        return Err(Error::ZeroQubits);
    }
    let expected = config.parameter_count();
    if theta.len() != expected {
        return Err(Error::DimensionMismatch { expected, got: theta.len() });
    }
    let n = config.n_qubits;
    let mut gates = Vec::with_capacity(expected + config.layers * n);
    for layer in 0..=config.layers {
        for q in 0..n {
            gates.push(Gate::Ry {
                target: q,
                angle: theta[layer * n + q],
                convention: AngleConvention::Half,
            });
        }
        if layer < config.layers && n > 1 {
            for q in 0..n {
                gates.push(Gate::Cnot { control: q, target: (q + 1) % n });
            }
        }
    }
    Circuit::new(n, gates)
}

/// A trained (or in-training) variational classifier. `history` holds
/// (iteration, objective) pairs starting at iteration 0 with the initial
/// objective.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VariationalModel {
    pub preset: Preset,
    pub feature_map: FeatureMapConfig,
    pub ansatz: AnsatzConfig,
    pub theta: Vec<f64>,
    pub history: Vec<(usize, f64)>,
    pub converged: bool,
}

impl VariationalModel {
    /// ⟨Z⊗…⊗Z⟩ of the encoded-and-rotated state; always in [−1, 1].
    pub fn expectation(&self, x: &[f64]) -> Result<f64> {
        let encoded = encode(&self.feature_map, x)?;
        let ansatz = build_ansatz(&self.ansatz, &self.theta)?;
        Ok(expectation_parity_z(&run_circuit(&ansatz, &encoded)?))
    }

    /// Predicted label; sign(0) resolves to +1.
    pub fn predict(&self, x: &[f64]) -> Result<i8> {
        Ok(if self.expectation(x)? >= 0.0 { 1 } else { -1 })
    }
}

/// Mean squared distance between labels and expectations over a batch.
pub fn squared_loss(model: &VariationalModel, x: &FeatureMatrix, y: &[i8]) -> Result<f64> {
    let engine = Engine::prepare(&model.feature_map, &model.ansatz, x, y)?;
    Ok(engine.loss(&model.theta))
}

/// Exact gradient of [`squared_loss`] in θ via the parameter-shift rule:
/// component i averages −2 (y_n − e_n) · (e_n(θ_i+π/2) − e_n(θ_i−π/2)) / 2.
pub fn parameter_shift_gradient(
    model: &VariationalModel,
    x: &FeatureMatrix,
    y: &[i8],
) -> Result<Vec<f64>> {
    let engine = Engine::prepare(&model.feature_map, &model.ansatz, x, y)?;
    Ok(engine.gradient(&model.theta))
}

/// Free-function form of [`VariationalModel::predict`].
pub fn variational_predict(model: &VariationalModel, x: &[f64]) -> Result<i8> {
    model.predict(x)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TrainParams {
    pub lr: f64,
    pub max_iters: usize,
    pub eps: f64,
    pub seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams { lr: 0.1, max_iters: 100, eps: 1e-4, seed: 0 }
    }
}

/// Full-batch gradient descent from a seeded uniform [−π, π] start.
///
/// Stops early when the parameter update norm ‖θ_{t+1} − θ_t‖ drops below
/// `eps`; `converged` records whether that happened within `max_iters`.
pub fn train_variational(
    preset: Preset,
    feature_map: FeatureMapConfig,
    ansatz: AnsatzConfig,
    x: &FeatureMatrix,
    y: &[i8],
    params: &TrainParams,
) -> Result<VariationalModel> {
    if y.is_empty() {
        return Err(Error::EmptyInput("training labels"));
    }
    if y.iter().all(|&v| v == y[0]) {
        return Err(Error::SingleClass);
    }
    if !(params.lr >= 0.0) || !params.lr.is_finite() {
        return Err(Error::invalid("lr", format!("must be finite and >= 0, got {}", params.lr)));
    }
    if params.max_iters == 0 {
        return Err(Error::invalid("max_iters", "must be at least 1"));
    }
    let engine = Engine::prepare(&feature_map, &ansatz, x, y)?;

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut theta: Vec<f64> = (0..ansatz.parameter_count())
        .map(|_| rng.gen_range(-PI..=PI))
        .collect();

    let mut history = vec![(0usize, engine.loss(&theta))];
    let mut converged = false;
    for iteration in 1..=params.max_iters {
        let grad = engine.gradient(&theta);
        let mut delta_sq = 0.0;
        for (t, g) in theta.iter_mut().zip(&grad) {
            let step = params.lr * g;
            *t -= step;
            delta_sq += step * step;
        }
        history.push((iteration, engine.loss(&theta)));
        if delta_sq.sqrt() < params.eps {
            converged = true;
            break;
        }
    }

    Ok(VariationalModel { preset, feature_map, ansatz, theta, history, converged })
}

/// Barren-plateau diagnostic: the empirical mean of ‖∇C‖² over `n_samples`
/// uniform draws of θ, for a single-sample loss at one fixed random x with
/// label +1. The x is drawn once from the seed, uniformly in [0, π] per
/// coordinate (the default data-encoding range). Diagnostic only; no
/// threshold is enforced anywhere.
pub fn gradient_variance_probe(
    feature_map: &FeatureMapConfig,
    ansatz: &AnsatzConfig,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    if n_samples < 2 {
        return Err(Error::invalid("n_samples", format!("need at least 2, got {n_samples}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<f64> = (0..feature_map.n_qubits).map(|_| rng.gen_range(0.0..=PI)).collect();
    let matrix = FeatureMatrix::from_rows(vec![x])?;
    let engine = Engine::prepare(feature_map, ansatz, &matrix, &[1])?;

    let p = ansatz.parameter_count();
    let mut total = 0.0;
    for _ in 0..n_samples {
        let theta: Vec<f64> = (0..p).map(|_| rng.gen_range(-PI..=PI)).collect();
        let grad = engine.gradient(&theta);
        total += grad.iter().map(|g| g * g).sum::<f64>();
    }
    Ok(total / n_samples as f64)
}

/// Shared evaluation engine: encodes every sample once, then re-runs only
/// the ansatz for each θ (and each shift) on the cached states.
struct Engine {
    ansatz: AnsatzConfig,
    encoded: Vec<Statevector>,
    labels: Vec<f64>,
}

impl Engine {
    fn prepare(
        feature_map: &FeatureMapConfig,
        ansatz: &AnsatzConfig,
        x: &FeatureMatrix,
        y: &[i8],
    ) -> Result<Self> {
        if x.rows() == 0 {
            return Err(Error::EmptyInput("training batch"));
        }
        if x.rows() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.rows(), got: y.len() });
        }
        if ansatz.n_qubits != feature_map.n_qubits {
            return Err(Error::QubitCountMismatch {
                left: ansatz.n_qubits,
                right: feature_map.n_qubits,
            });
        }
        for &label in y {
            if label != 1 && label != -1 {
                return Err(Error::invalid("labels", format!("expected ±1, got {label}")));
            }
        }
        let encoded: Vec<Statevector> = (0..x.rows())
            .into_par_iter()
            .map(|i| encode(feature_map, x.row(i)))
            .collect::<Result<_>>()?;
        Ok(Engine {
            ansatz: *ansatz,
            encoded,
            labels: y.iter().map(|&v| f64::from(v)).collect(),
        })
    }

    /// Per-sample expectations for a fixed θ, in sample order.
    fn expectations(&self, theta: &[f64]) -> Vec<f64> {
        let circuit = build_ansatz(&self.ansatz, theta).expect("theta length checked upstream");
        self.encoded
            .par_iter()
            .map(|state| {
                let rotated = run_circuit(&circuit, state).expect("widths checked upstream");
                expectation_parity_z(&rotated)
            })
            .collect()
    }

    fn loss(&self, theta: &[f64]) -> f64 {
        let e = self.expectations(theta);
        let n = self.labels.len() as f64;
        self.labels
            .iter()
            .zip(&e)
            .map(|(&y, &ei)| (y - ei) * (y - ei))
            .sum::<f64>()
            / n
    }

    fn gradient(&self, theta: &[f64]) -> Vec<f64> {
        let base = self.expectations(theta);
        let residuals: Vec<f64> =
            self.labels.iter().zip(&base).map(|(&y, &e)| y - e).collect();
        let n = self.labels.len() as f64;
        let mut shifted = theta.to_vec();
        let mut grad = Vec::with_capacity(theta.len());
        for p in 0..theta.len() {
            let original = shifted[p];
            shifted[p] = original + FRAC_PI_2;
            let plus = self.expectations(&shifted);
            shifted[p] = original - FRAC_PI_2;
            let minus = self.expectations(&shifted);
            shifted[p] = original;
            let component: f64 = residuals
                .iter()
                .zip(plus.iter().zip(&minus))
                .map(|(&r, (&ep, &em))| -2.0 * r * 0.5 * (ep - em))
                .sum::<f64>()
                / n;
            grad.push(component);
        }
        grad
    }
}
