//! Kernel SVM trained by Sequential Minimal Optimization.
//!
//! The solver maximizes the usual dual
//!   D(α) = Σ α_i − ½ Σ α_i α_j y_i y_j K_ij
//! subject to 0 ≤ α_i ≤ C and Σ α_i y_i = 0, by repeatedly optimizing one
//! pair of multipliers in closed form. Pair selection follows Platt: the
//! first index is the worst KKT violator, the second maximizes |E_i − E_j|,
//! and a seeded random scan of the remaining indices serves as fallback when
//! that heuristic cannot make progress.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feature_map::FeatureMapConfig;
use crate::feature_matrix::FeatureMatrix;
use crate::kernel::{kernel_entry, KernelMatrix};

/// Solver hyperparameters. The seed only drives the pair-selection
/// fallback; two runs with the same seed are identical.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QsvcParams {
    pub c: f64,
    pub tol: f64,
    pub max_passes: usize,
    pub seed: u64,
}

impl Default for QsvcParams {
    fn default() -> Self {
        QsvcParams { c: 1.0, tol: 1e-3, max_passes: 200, seed: 0 }
    }
}

/// Trained kernel SVM. `train_features` and `feature_map` are retained so
/// that kernel rows against the training set can be rebuilt at prediction
/// time.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QsvcModel {
    pub alphas: Vec<f64>,
    pub labels: Vec<i8>,
    pub bias: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub feature_map: FeatureMapConfig,
    pub train_features: FeatureMatrix,
    pub converged: bool,
}

impl QsvcModel {
    /// Indices with α_i > 0.
    pub fn support_indices(&self) -> Vec<usize> {
        self.alphas
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Decision value f = Σ α_i y_i k_row[i] + b.
    pub fn decision(&self, k_row: &[f64]) -> Result<f64> {
        if k_row.len() != self.alphas.len() {
            return Err(Error::DimensionMismatch { expected: self.alphas.len(), got: k_row.len() });
        }
        let sum: f64 = self
            .alphas
            .iter()
            .zip(&self.labels)
            .zip(k_row)
            .map(|((&a, &y), &k)| a * f64::from(y) * k)
            .sum();
        Ok(sum + self.bias)
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

    /// Maximum violation of the KKT optimality cases over the training set:
    /// α=0 wants y·f ≥ 1, interior α wants y·f = 1, α=C wants y·f ≤ 1.
    /// Zero means the exact optimum.
    pub fn kkt_residual(&self, kernel: &KernelMatrix) -> Result<f64> {
        let m = self.alphas.len();
        if kernel.size() != m {
            return Err(Error::DimensionMismatch { expected: m, got: kernel.size() });
        }
        let mut worst: f64 = 0.0;
        for i in 0..m {
            let f = self.decision(kernel.row(i))?;
            let yf = f64::from(self.labels[i]) * f;
            worst = worst.max(kkt_violation(self.alphas[i], yf, self.c));
        }
        Ok(worst)
    }
}

/// Dual objective Σ α_i − ½ Σ α_i α_j y_i y_j K_ij.
pub fn dual_objective(alphas: &[f64], kernel: &KernelMatrix, labels: &[i8]) -> f64 {
    let m = alphas.len();
    let linear: f64 = alphas.iter().sum();
    let mut quad = 0.0;
    for i in 0..m {
        if alphas[i] == 0.0 {
            continue;
        }
        for j in 0..m {
            quad += alphas[i]
                * alphas[j]
                * f64::from(labels[i])
                * f64::from(labels[j])
                * kernel.get(i, j);
        }
    }
    linear - 0.5 * quad
}

fn kkt_violation(alpha: f64, yf: f64, c: f64) -> f64 {
    let eps = 1e-12 * c.max(1.0);
    if alpha <= eps {
        (1.0 - yf).max(0.0)
    } else if alpha >= c - eps {
        (yf - 1.0).max(0.0)
    } else {
        (yf - 1.0).abs()
    }
}

/// Bias that best satisfies the KKT conditions for the current multipliers:
/// the mean of y_i − f_raw_i over free support vectors, or the midpoint of
/// the feasible interval implied by the bound multipliers when none are
/// free.
fn compute_bias(alphas: &[f64], f_raw: &[f64], labels: &[i8], c: f64) -> f64 {
    let eps = 1e-12 * c.max(1.0);
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    for i in 0..alphas.len() {
        if alphas[i] > eps && alphas[i] < c - eps {
            free_sum += f64::from(labels[i]) - f_raw[i];
            free_count += 1;
        }
    }
    if free_count > 0 {
        return free_sum / free_count as f64;
    }
    // At a bound multiplier the margin constraint is one-sided, so each
    // bound point contributes either a lower or an upper limit on b.
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    for i in 0..alphas.len() {
        let y = f64::from(labels[i]);
        let candidate = y - f_raw[i];
        let at_zero = alphas[i] <= eps;
        let wants_lower = (at_zero && y > 0.0) || (!at_zero && y < 0.0);
        if wants_lower {
            lower = lower.max(candidate);
        } else {
            upper = upper.min(candidate);
        }
    }
    match (lower.is_finite(), upper.is_finite()) {
        (true, true) => 0.5 * (lower + upper),
        (true, false) => lower,
        (false, true) => upper,
        (false, false) => 0.0,
    }
}

/// Trains a kernel SVM on a precomputed Gram matrix.
///
/// `feature_map` and `train_features` are stored in the model for later
/// prediction; the solver itself only consumes `kernel` and `labels`.
/// `max_passes` bounds the work: one pass corresponds to m accepted pair
/// updates. If the KKT residual has not reached `tol` by then, the best
/// iterate is returned with `converged = false`. The kernel is trusted as
/// given; an indefinite matrix does not raise an error because the endpoint
/// steps and the pass bound keep the solver finite either way.
pub fn train_qsvc(
    kernel: &KernelMatrix,
    labels: &[i8],
    feature_map: FeatureMapConfig,
    train_features: FeatureMatrix,
    params: &QsvcParams,
) -> Result<QsvcModel> {
    let m = labels.len();
    validate_labels(labels)?;
    if kernel.size() != m {
        return Err(Error::DimensionMismatch { expected: m, got: kernel.size() });
    }
    if train_features.rows() != m {
        return Err(Error::DimensionMismatch { expected: m, got: train_features.rows() });
    }
    if !(params.c > 0.0) || !params.c.is_finite() {
        return Err(Error::invalid("C", format!("must be positive and finite, got {}", params.c)));
    }
    if !(params.tol > 0.0) {
        return Err(Error::invalid("tol", "must be positive"));
    }

    let c = params.c;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut alphas = vec![0.0f64; m];
    // f_raw[i] = Σ_j α_j y_j K_ij, maintained incrementally.
    let mut f_raw = vec![0.0f64; m];
    let mut converged = false;
    let max_updates = params.max_passes.saturating_mul(m).max(1);
    let mut updates = 0usize;

    #[cfg(debug_assertions)]
    let mut last_objective = 0.0f64;

    while updates < max_updates {
        let bias = compute_bias(&alphas, &f_raw, labels, c);
        let violations: Vec<f64> = (0..m)
            .map(|i| kkt_violation(alphas[i], f64::from(labels[i]) * (f_raw[i] + bias), c))
            .collect();
        let worst = violations.iter().cloned().fold(0.0f64, f64::max);
        if worst <= params.tol {
            converged = true;
            break;
        }

        let mut order: Vec<usize> = (0..m).filter(|&i| violations[i] > params.tol).collect();
        order.sort_by(|&a, &b| {
            violations[b]
                .partial_cmp(&violations[a])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });

        let mut progressed = false;
        'first: for &i in &order {
            let e_i = f_raw[i] + bias - f64::from(labels[i]);
            // Heuristic second choice, then every other index in seeded
            // random order.
            let mut candidates: Vec<usize> = (0..m).filter(|&j| j != i).collect();
            let heuristic = candidates.iter().copied().max_by(|&a, &b| {
                let da = (e_i - (f_raw[a] + bias - f64::from(labels[a]))).abs();
                let db = (e_i - (f_raw[b] + bias - f64::from(labels[b]))).abs();
                da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
            });
            candidates.shuffle(&mut rng);
            let ordered = heuristic.into_iter().chain(candidates);
            for j in ordered {
                if try_pair_step(i, j, kernel, labels, c, &mut alphas, &mut f_raw, bias) {
                    updates += 1;
                    progressed = true;

                    #[cfg(debug_assertions)]
                    {
                        // The dual must never decrease across accepted steps.
                        let objective = dual_objective(&alphas, kernel, labels);
                        debug_assert!(
                            objective >= last_objective - 1e-9,
                            "dual objective decreased: {last_objective} -> {objective}"
                        );
                        last_objective = objective;
                    }
                    break 'first;
                }
            }
        }
        if !progressed {
            // No pair can improve the dual: numerically optimal even if the
            // residual check above has not fired.
            break;
        }
    }

    let bias = compute_bias(&alphas, &f_raw, labels, c);
    let model = QsvcModel {
        alphas,
        labels: labels.to_vec(),
        bias,
        c,
        feature_map,
        train_features,
        converged,
    };
    if !converged {
        // The loop may have exited because no progress was possible; accept
        // the iterate as converged when it already meets the tolerance.
        let residual = model.kkt_residual(kernel)?;
        if residual <= params.tol {
            return Ok(QsvcModel { converged: true, ..model });
        }
    }
    Ok(model)
}

/// One closed-form SMO step on the pair (i, j). Returns false when the pair
/// cannot make meaningful progress.
#[allow(clippy::too_many_arguments)]
fn try_pair_step(
    i: usize,
    j: usize,
    kernel: &KernelMatrix,
    labels: &[i8],
    c: f64,
    alphas: &mut [f64],
    f_raw: &mut [f64],
    bias: f64,
) -> bool {
    if i == j {
        return false;
    }
    let y_i = f64::from(labels[i]);
    let y_j = f64::from(labels[j]);
    let s = y_i * y_j;
    let (lo, hi) = if s < 0.0 {
        ((alphas[j] - alphas[i]).max(0.0), (c + alphas[j] - alphas[i]).min(c))
    } else {
        ((alphas[i] + alphas[j] - c).max(0.0), (alphas[i] + alphas[j]).min(c))
    };
    if hi - lo < 1e-12 {
        return false;
    }

    let e_i = f_raw[i] + bias - y_i;
    let e_j = f_raw[j] + bias - y_j;
    let eta = kernel.get(i, i) + kernel.get(j, j) - 2.0 * kernel.get(i, j);

    let alpha_j_old = alphas[j];
    // Along the constraint line the dual change for α_j := α_j + t is
    // ΔD(t) = t·y_j(E_i − E_j) − η t² / 2.
    let slope = y_j * (e_i - e_j);
    let alpha_j_new = if eta > 1e-12 {
        (alpha_j_old + slope / eta).clamp(lo, hi)
    } else {
        // Flat or concave-up section: the maximum sits at an endpoint.
        let gain = |t: f64| t * slope - 0.5 * eta * t * t;
        let gain_lo = gain(lo - alpha_j_old);
        let gain_hi = gain(hi - alpha_j_old);
        if gain_lo.max(gain_hi) <= 1e-12 {
            return false;
        }
        if gain_lo > gain_hi {
            lo
        } else {
            hi
        }
    };

    let delta_j = alpha_j_new - alpha_j_old;
    if delta_j.abs() < 1e-12 * (alpha_j_new + alpha_j_old + 1e-12) {
        return false;
    }
    let alpha_i_new = (alphas[i] + s * (alpha_j_old - alpha_j_new)).clamp(0.0, c);

    let delta_fi = (alpha_i_new - alphas[i]) * y_i;
    let delta_fj = delta_j * y_j;
    alphas[i] = alpha_i_new;
    alphas[j] = alpha_j_new;
    for k in 0..f_raw.len() {
        f_raw[k] += delta_fi * kernel.get(i, k) + delta_fj * kernel.get(j, k);
    }
    true
}

fn validate_labels(labels: &[i8]) -> Result<()> {
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
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feature_map::FeatureMapKind;

    fn dummy_encoding(points: Vec<Vec<f64>>) -> (FeatureMapConfig, FeatureMatrix) {
        let cols = points[0].len();
        (
            FeatureMapConfig::new(FeatureMapKind::Z, cols),
            FeatureMatrix::from_rows(points).unwrap(),
        )
    }

    fn two_point_fixture() -> (KernelMatrix, Vec<i8>, FeatureMapConfig, FeatureMatrix) {
        let kernel = KernelMatrix::from_entries(2, vec![1.0, -1.0, -1.0, 1.0]).unwrap();
        let labels = vec![1, -1];
        let (map, feats) = dummy_encoding(vec![vec![1.0], vec![-1.0]]);
        (kernel, labels, map, feats)
    }

    #[test]
    fn two_point_problem_recovers_hand_solution() {
        let (kernel, labels, map, feats) = two_point_fixture();
        let params = QsvcParams { c: 10.0, ..QsvcParams::default() };
        let model = train_qsvc(&kernel, &labels, map, feats, &params).unwrap();
        assert!(model.converged);
        assert!((model.alphas[0] - 0.5).abs() < 1e-9);
        assert!((model.alphas[1] - 0.5).abs() < 1e-9);
        assert!(model.bias.abs() < 1e-9);
        // Decision on the first training point: f = +1, at the margin.
        let f = model.decision(kernel.row(0)).unwrap();
        assert!((f - 1.0).abs() < 1e-9);
        assert_eq!(model.predict(kernel.row(0)).unwrap(), 1);
        assert_eq!(model.predict(kernel.row(1)).unwrap(), -1);
        assert!(model.kkt_residual(&kernel).unwrap() < 1e-9);
    }

    #[test]
    fn degenerate_model_decision_is_bias() {
        let (_, labels, map, feats) = two_point_fixture();
        let model = QsvcModel {
            alphas: vec![0.0, 0.0],
            labels,
            bias: 0.3,
            c: 1.0,
            feature_map: map,
            train_features: feats,
            converged: true,
        };
        assert!((model.decision(&[0.7, 0.2]).unwrap() - 0.3).abs() < 1e-15);
        assert!((model.decision(&[0.0, 0.0]).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn sign_tie_breaks_positive() {
        let (_, labels, map, feats) = two_point_fixture();
        let model = QsvcModel {
            alphas: vec![0.0, 0.0],
            labels,
            bias: 0.0,
            c: 1.0,
            feature_map: map,
            train_features: feats,
            converged: true,
        };
        assert_eq!(model.predict(&[0.0, 0.0]).unwrap(), 1);
        let negative = QsvcModel { bias: -0.2, ..model };
        assert_eq!(negative.predict(&[0.0, 0.0]).unwrap(), -1);
    }

    #[test]
    fn all_zero_alpha_residual_is_one() {
        let (kernel, labels, map, feats) = two_point_fixture();
        let model = QsvcModel {
            alphas: vec![0.0, 0.0],
            labels,
            bias: 0.0,
            c: 1.0,
            feature_map: map,
            train_features: feats,
            converged: false,
        };
        assert!((model.kkt_residual(&kernel).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_class_rejected() {
        let kernel = KernelMatrix::from_entries(2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let (map, feats) = dummy_encoding(vec![vec![0.0], vec![1.0]]);
        let err = train_qsvc(&kernel, &[1, 1], map, feats, &QsvcParams::default());
        assert!(matches!(err, Err(Error::SingleClass)));
    }

    #[test]
    fn equality_constraint_preserved() {
        let (kernel, labels, map, feats) = two_point_fixture();
        let model =
            train_qsvc(&kernel, &labels, map, feats, &QsvcParams::default()).unwrap();
        let balance: f64 = model
            .alphas
            .iter()
            .zip(&model.labels)
            .map(|(&a, &y)| a * f64::from(y))
            .sum();
        assert!(balance.abs() < 1e-6);
    }

    #[test]
    fn duplicate_training_point_classified_by_label() {
        // Two copies of each of two distinct points; kernel from a dot
        // product. Separable, so with large C each training point's decision
        // sign matches its label.
        let pts = [[1.0, 0.2], [0.9, 0.3], [-1.0, -0.1], [-0.8, -0.4]];
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let mut entries = Vec::new();
        for a in &pts {
            for b in &pts {
                entries.push(dot(a, b));
            }
        }
        let kernel = KernelMatrix::from_entries(4, entries).unwrap();
        let labels = vec![1, 1, -1, -1];
        let (map, feats) = dummy_encoding(pts.iter().map(|p| p.to_vec()).collect());
        let params = QsvcParams { c: 100.0, ..QsvcParams::default() };
        let model = train_qsvc(&kernel, &labels, map, feats, &params).unwrap();
        for i in 0..4 {
            assert_eq!(model.predict(kernel.row(i)).unwrap(), labels[i], "point {i}");
        }
    }

    #[test]
    fn model_round_trips_through_json() {
        let (kernel, labels, map, feats) = two_point_fixture();
        let params = QsvcParams { c: 10.0, ..QsvcParams::default() };
        let model = train_qsvc(&kernel, &labels, map, feats, &params).unwrap();
        let json = serde_json::to_string(&model).unwrap();
        let back: QsvcModel = serde_json::from_str(&json).unwrap();
        assert_eq!(model.alphas, back.alphas);
        assert_eq!(model.bias.to_bits(), back.bias.to_bits());
        assert_eq!(model.labels, back.labels);
        assert_eq!(model.train_features, back.train_features);
    }

    #[test]
    fn decision_rejects_wrong_row_length() {
        let (kernel, labels, map, feats) = two_point_fixture();
        let model =
            train_qsvc(&kernel, &labels, map, feats, &QsvcParams::default()).unwrap();
        assert!(matches!(
            model.decision(&[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
