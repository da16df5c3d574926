//! Kernelized Pegasos: stochastic subgradient descent on the primal SVM
//! objective
//!   f(w) = (λ/2)‖w‖² + (1/m) Σ max(0, 1 − y_i ⟨w, φ(x_i)⟩).
//!
//! The weight vector lives in the quantum feature space and is never
//! materialized; it is carried as coefficients c_i with
//! w = Σ c_i y_i φ(x_i), so every inner product reduces to kernel sums.
//! Each step samples one training index, scales all coefficients by
//! (1 − η_t λ), bumps the sampled coefficient by η_t when its margin is
//! below 1, and projects w back into the ball of radius 1/√λ.
//!
//! [`verify_pegasos_bound`] checks the averaged-objective convergence
//! guarantee (1/T) Σ f(w_t) ≤ f(w*) + G²(1 + ln T)/(2λT) numerically,
//! taking f(w*) from an SMO solve of the equivalent dual.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feature_map::FeatureMapConfig;
use crate::feature_matrix::FeatureMatrix;
use crate::kernel::{kernel_entry, KernelMatrix};
use crate::qsvc::{train_qsvc, QsvcParams};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PegasosParams {
    pub lambda: f64,
    pub steps: usize,
    pub seed: u64,
}

impl Default for PegasosParams {
    fn default() -> Self {
        PegasosParams { lambda: 0.01, steps: 1000, seed: 0 }
    }
}

/// Trained Pegasos classifier in kernel-expansion form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PegasosModel {
    pub coefficients: Vec<f64>,
    pub labels: Vec<i8>,
    pub lambda: f64,
    pub steps_t: usize,
    pub feature_map: FeatureMapConfig,
    pub train_features: FeatureMatrix,
}

impl PegasosModel {
    /// Decision value ⟨w, φ(x)⟩ = Σ_j c_j y_j k_row[j].
    pub fn decision(&self, k_row: &[f64]) -> Result<f64> {
        if k_row.len() != self.coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coefficients.len(),
                got: k_row.len(),
            });
        }
        Ok(self
            .coefficients
            .iter()
            .zip(&self.labels)
            .zip(k_row)
            .map(|((&c, &y), &k)| c * f64::from(y) * k)
            .sum())
    }

    /// Predicted label; sign(0) resolves to +1.
    pub fn predict(&self, k_row: &[f64]) -> Result<i8> {
        Ok(if self.decision(k_row)? >= 0.0 { 1 } else { -1 })
    }

    /// Kernel row of a new feature vector against the training set.
    pub fn kernel_row(&self, x: &[f64]) -> Result<Vec<f64>> {
        (0..self.train_features.rows())
            .map(|i| kernel_entry(&self.feature_map, x, self.train_features.row(i)))
            .collect()
    }

    /// ‖w‖ implied by the coefficient expansion.
    pub fn weight_norm(&self, kernel: &KernelMatrix) -> Result<f64> {
        if kernel.size() != self.coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coefficients.len(),
                got: kernel.size(),
            });
        }
        Ok(weight_norm_sq(&self.coefficients, &self.labels, kernel).sqrt())
    }
}

fn weight_norm_sq(coefficients: &[f64], labels: &[i8], kernel: &KernelMatrix) -> f64 {
    let m = coefficients.len();
    let mut sum = 0.0;
    for i in 0..m {
        if coefficients[i] == 0.0 {
            continue;
        }
        for j in 0..m {
            sum += coefficients[i]
                * coefficients[j]
                * f64::from(labels[i])
                * f64::from(labels[j])
                * kernel.get(i, j);
        }
    }
    sum.max(0.0)
}

/// Primal objective (λ/2)‖w‖² + mean hinge loss, evaluated through the
/// kernel expansion.
pub fn pegasos_objective(
    coefficients: &[f64],
    kernel: &KernelMatrix,
    labels: &[i8],
    lambda: f64,
) -> Result<f64> {
    let m = labels.len();
    if coefficients.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: coefficients.len() });
    }
    if kernel.size() != m {
        return Err(Error::DimensionMismatch { expected: m, got: kernel.size() });
    }
    let norm_sq = weight_norm_sq(coefficients, labels, kernel);
    let mut hinge = 0.0;
    for i in 0..m {
        let f_i: f64 = (0..m)
            .map(|j| coefficients[j] * f64::from(labels[j]) * kernel.get(j, i))
            .sum();
        hinge += (1.0 - f64::from(labels[i]) * f_i).max(0.0);
    }
    Ok(0.5 * lambda * norm_sq + hinge / m as f64)
}

struct PegasosState {
    coefficients: Vec<f64>,
    // decisions[j] = Σ_i c_i y_i K_ij, kept in lockstep with coefficients
    // so margins, the norm, and the objective stay O(m) per step.
    decisions: Vec<f64>,
}

impl PegasosState {
    fn new(m: usize) -> Self {
        PegasosState { coefficients: vec![0.0; m], decisions: vec![0.0; m] }
    }

    fn norm_sq(&self, labels: &[i8]) -> f64 {
        self.coefficients
            .iter()
            .zip(labels)
            .zip(&self.decisions)
            .map(|((&c, &y), &d)| c * f64::from(y) * d)
            .sum::<f64>()
            .max(0.0)
    }

    fn objective(&self, labels: &[i8], lambda: f64) -> f64 {
        let hinge: f64 = labels
            .iter()
            .zip(&self.decisions)
            .map(|(&y, &d)| (1.0 - f64::from(y) * d).max(0.0))
            .sum();
        0.5 * lambda * self.norm_sq(labels) + hinge / labels.len() as f64
    }

    fn scale(&mut self, factor: f64) {
        for c in &mut self.coefficients {
            *c *= factor;
        }
        for d in &mut self.decisions {
            *d *= factor;
        }
    }

    fn step(&mut self, t: usize, i: usize, kernel: &KernelMatrix, labels: &[i8], lambda: f64) {
        let eta = 1.0 / (lambda * t as f64);
        let margin = f64::from(labels[i]) * self.decisions[i];
        self.scale(1.0 - eta * lambda);
        if margin < 1.0 {
            self.coefficients[i] += eta;
            let y_i = f64::from(labels[i]);
            for (j, d) in self.decisions.iter_mut().enumerate() {
                *d += eta * y_i * kernel.get(i, j);
            }
        }
        let radius = 1.0 / lambda.sqrt();
        let norm = self.norm_sq(labels).sqrt();
        if norm > radius {
            self.scale(radius / norm);
        }
    }
}

fn validate_inputs(kernel: &KernelMatrix, labels: &[i8], lambda: f64) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::EmptyInput("labels"));
    }
    for &y in labels {
        if y != 1 && y != -1 {
            return Err(Error::invalid("labels", format!("expected ±1, got {y}")));
        }
    }
    if labels.iter().all(|&y| y == labels[0]) {
        return Err(Error::SingleClass);
    }
    if kernel.size() != labels.len() {
        return Err(Error::DimensionMismatch { expected: labels.len(), got: kernel.size() });
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::invalid("lambda", format!("must be positive, got {lambda}")));
    }
    Ok(())
}

/// Runs `params.steps` Pegasos iterations and returns the last iterate.
pub fn train_pegasos(
    kernel: &KernelMatrix,
    labels: &[i8],
    feature_map: FeatureMapConfig,
    train_features: FeatureMatrix,
    params: &PegasosParams,
) -> Result<PegasosModel> {
    validate_inputs(kernel, labels, params.lambda)?;
    if params.steps == 0 {
        return Err(Error::invalid("steps", "must be at least 1"));
    }
    if train_features.rows() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            got: train_features.rows(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut state = PegasosState::new(labels.len());
    for t in 1..=params.steps {
        let i = rng.gen_range(0..labels.len());
        state.step(t, i, kernel, labels, params.lambda);
    }
    Ok(PegasosModel {
        coefficients: state.coefficients,
        labels: labels.to_vec(),
        lambda: params.lambda,
        steps_t: params.steps,
        feature_map,
        train_features,
    })
}

/// Outcome of the convergence-bound check. `lhs` holds the per-trial values
/// of (1/T) Σ f(w_t) − f(w*); the bound holds when every one of them stays
/// at or below `rhs`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PegasosBoundReport {
    pub lhs: Vec<f64>,
    pub rhs: f64,
    pub holds: bool,
}

impl PegasosBoundReport {
    pub fn worst_lhs(&self) -> f64 {
        self.lhs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Checks the averaged-objective guarantee over `trials` seeded runs.
///
/// The reference optimum f(w*) comes from an SMO solve with C = 1/(λm),
/// the box constraint under which the C-SVM dual optimum minimizes this
/// primal objective; its multipliers transfer directly as coefficients
/// c_i = α_i. The subgradient bound uses G = 1 + max_i √K_ii: the
/// regularization term contributes √λ·‖w‖ ≤ 1 inside the projection ball
/// and the hinge term at most the feature norm.
pub fn verify_pegasos_bound(
    kernel: &KernelMatrix,
    labels: &[i8],
    lambda: f64,
    steps: usize,
    trials: usize,
    seed: u64,
) -> Result<PegasosBoundReport> {
    validate_inputs(kernel, labels, lambda)?;
    if steps < 3 {
        return Err(Error::invalid("T", format!("theorem requires T >= 3, got {steps}")));
    }
    if trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }

    let m = labels.len();
    let oracle_params = QsvcParams {
        c: 1.0 / (lambda * m as f64),
        tol: 1e-6,
        max_passes: 2000,
        seed,
    };
    // Placeholder encoding: the oracle model is only used for its alphas.
    let dummy_map = FeatureMapConfig::new(crate::feature_map::FeatureMapKind::Z, 1);
    let dummy_features = FeatureMatrix::zeros(m, 1);
    let oracle = train_qsvc(kernel, labels, dummy_map, dummy_features, &oracle_params)?;
    let f_star = pegasos_objective(&oracle.alphas, kernel, labels, lambda)?;

    let max_k: f64 = (0..m).map(|i| kernel.get(i, i)).fold(0.0, f64::max);
    let g = 1.0 + max_k.max(0.0).sqrt();
    let t = steps as f64;
    let rhs = g * g * (1.0 + t.ln()) / (2.0 * lambda * t);

    let mut lhs = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
        let mut state = PegasosState::new(m);
        let mut total = 0.0;
        for step in 1..=steps {
            // f(w_t) is recorded at the iterate the step starts from, so
            // w_1 = 0 is included and the post-update w_{T+1} is not.
            total += state.objective(labels, lambda);
            let i = rng.gen_range(0..m);
            state.step(step, i, kernel, labels, lambda);
        }
        lhs.push(total / t - f_star);
    }
    let holds = lhs.iter().all(|&v| v <= rhs);
    Ok(PegasosBoundReport { lhs, rhs, holds })
}
