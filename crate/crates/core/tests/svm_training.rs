//! SVM solver validation against independent optimizers.
//!
//! The SMO solver is compared to a brute-force grid search on the dual
//! (small problems, where enumeration is exact up to grid resolution), and
//! to the KKT conditions directly (larger random problems). The Pegasos
//! averaged-objective guarantee is checked across a grid of (λ, T)
//! settings with the SMO solve providing the reference optimum.

mod support;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use qgenml_core::{
    dual_objective, gram_matrix, pegasos_objective, train_pegasos, train_qsvc,
    verify_pegasos_bound, FeatureMapConfig, FeatureMapKind, FeatureMatrix, PegasosParams,
    QsvcParams,
};

fn random_problem(
    rng: &mut ChaCha8Rng,
    m: usize,
    n_qubits: usize,
) -> (qgenml_core::KernelMatrix, Vec<i8>, FeatureMatrix, FeatureMapConfig) {
    let config = FeatureMapConfig::new(FeatureMapKind::Z, n_qubits);
    let data: Vec<f64> = (0..m * n_qubits).map(|_| rng.gen_range(0.0..=PI)).collect();
    let x = FeatureMatrix::new(m, n_qubits, data).unwrap();
    let gram = gram_matrix(&config, &x).unwrap();
    let mut labels: Vec<i8> = (0..m).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    // Shuffle label positions so class layout isn't an artifact of index
    // parity.
    for i in (1..m).rev() {
        let j = rng.gen_range(0..=i);
        labels.swap(i, j);
    }
    (gram, labels, x, config)
}

#[test]
fn smo_matches_grid_search_on_three_point_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..10 {
        let (gram, mut labels, x, config) = random_problem(&mut rng, 3, 2);
        // Force both classes (3 points can end up single-class after the
        // parity assignment + shuffle only if m odd gives 2/1 — fine, but
        // be explicit anyway).
        labels[0] = 1;
        labels[1] = -1;
        let c = [0.5, 1.0, 2.0][trial % 3];
        let params = QsvcParams { c, tol: 1e-6, max_passes: 500, seed: trial as u64 };
        let model = train_qsvc(&gram, &labels, config, x, &params).unwrap();
        let smo_value = dual_objective(&model.alphas, &gram, &labels);

        let (_, grid_value) = support::grid_search_dual(&gram, &labels, c, 200);
        // Grid search undershoots the true optimum by at most the local
        // resolution; SMO must not fall below it and must stay within the
        // stated tolerance overall.
        assert!(
            smo_value >= grid_value - 1e-3,
            "trial {trial}: SMO dual {smo_value} below grid search {grid_value}"
        );
        assert!(
            (smo_value - grid_value).abs() < 1e-3,
            "trial {trial}: dual gap {} too large",
            (smo_value - grid_value).abs()
        );
    }
}

#[test]
fn smo_satisfies_kkt_on_random_twelve_point_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..20 {
        let (gram, labels, x, config) = random_problem(&mut rng, 12, 2);
        let params = QsvcParams { c: 1.0, tol: 1e-3, max_passes: 500, seed: trial as u64 };
        let model = train_qsvc(&gram, &labels, config, x, &params).unwrap();
        assert!(model.converged, "trial {trial}: SMO did not converge");
        let residual = model.kkt_residual(&gram).unwrap();
        assert!(
            residual <= 1e-3 + 1e-12,
            "trial {trial}: KKT residual {residual}"
        );
    }
}

#[test]
fn two_point_fixture_has_known_solution() {
    // K = [[1, −1], [−1, 1]], y = (+1, −1), C = 10: the dual optimum is
    // α = (1/2, 1/2) with zero bias.
    let gram = qgenml_core::KernelMatrix::from_entries(2, vec![1.0, -1.0, -1.0, 1.0]).unwrap();
    let labels = [1i8, -1];
    let config = FeatureMapConfig::new(FeatureMapKind::Z, 1);
    let x = FeatureMatrix::zeros(2, 1);
    let params = QsvcParams { c: 10.0, tol: 1e-8, max_passes: 100, seed: 0 };
    let model = train_qsvc(&gram, &labels, config, x, &params).unwrap();
    assert!((model.alphas[0] - 0.5).abs() < 1e-6);
    assert!((model.alphas[1] - 0.5).abs() < 1e-6);
    assert!(model.bias.abs() < 1e-6);

    // Grid search lands on the same objective.
    let (_, grid_value) = support::grid_search_dual(&gram, &labels, 10.0, 2000);
    let smo_value = dual_objective(&model.alphas, &gram, &labels);
    assert!((smo_value - grid_value).abs() < 1e-3);
}

#[test]
fn pegasos_bound_holds_across_parameter_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let (gram, labels, _, _) = random_problem(&mut rng, 8, 2);
    for &lambda in &[0.1, 0.5] {
        for &steps in &[100usize, 1000] {
            let report = verify_pegasos_bound(&gram, &labels, lambda, steps, 10, 7).unwrap();
            assert!(
                report.holds,
                "bound failed for λ={lambda}, T={steps}: worst lhs {} vs rhs {}",
                report.worst_lhs(),
                report.rhs
            );
            assert_eq!(report.lhs.len(), 10);
        }
    }
}

#[test]
fn pegasos_approaches_true_primal_optimum() {
    // Compare the late Pegasos iterate against two references: the exact
    // bias-free dual optimum (coordinate ascent — the problem Pegasos
    // actually minimizes) and the SMO-with-bias mapping used by the bound
    // verifier. The former is a hard lower bound; the latter can only sit
    // at or above it because its equality constraint shrinks the dual
    // feasible set.
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (gram, labels, x, config) = random_problem(&mut rng, 6, 2);
    let lambda = 0.1;
    let m = labels.len() as f64;
    let c = 1.0 / (lambda * m);

    let exact = support::no_bias_dual_ascent(&gram, &labels, c, 10_000);
    let f_exact = pegasos_objective(&exact, &gram, &labels, lambda).unwrap();

    let smo = train_qsvc(
        &gram,
        &labels,
        config.clone(),
        x.clone(),
        &QsvcParams { c, tol: 1e-8, max_passes: 2000, seed: 0 },
    )
    .unwrap();
    let f_smo = pegasos_objective(&smo.alphas, &gram, &labels, lambda).unwrap();
    assert!(
        f_smo >= f_exact - 1e-9,
        "with-bias reference {f_smo} dipped below the true optimum {f_exact}"
    );

    let pegasos = train_pegasos(
        &gram,
        &labels,
        config,
        x,
        &PegasosParams { lambda, steps: 20_000, seed: 3 },
    )
    .unwrap();
    let f_pegasos =
        pegasos_objective(&pegasos.coefficients, &gram, &labels, lambda).unwrap();

    assert!(
        f_pegasos >= f_exact - 1e-9,
        "iterate objective {f_pegasos} below the proven minimum {f_exact}"
    );
    assert!(
        f_pegasos <= f_exact + 0.05,
        "Pegasos objective {f_pegasos} far above the optimum {f_exact}"
    );
}

#[test]
fn pegasos_training_is_seed_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (gram, labels, x, config) = random_problem(&mut rng, 10, 2);
    let params = PegasosParams { lambda: 0.05, steps: 500, seed: 21 };
    let a = train_pegasos(&gram, &labels, config.clone(), x.clone(), &params).unwrap();
    let b = train_pegasos(&gram, &labels, config, x, &params).unwrap();
    assert_eq!(a.coefficients, b.coefficients);
}
