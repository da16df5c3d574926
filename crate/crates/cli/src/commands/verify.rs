//! `verify`: self-contained correctness checks.
//!
//! Runs a battery of built-in verifications (an analytically solved SVM
//! fixture, KKT residuals on random problems, the Pegasos regret bound, and
//! parameter-shift gradients against finite differences). With `--gram
//! FILE` it additionally audits a stored kernel matrix for the properties a
//! state-fidelity kernel must have. One line per check; any failure sets
//! exit code 1.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgenml_core::{
    gram_matrix, parameter_shift_gradient, squared_loss, train_qsvc, verify_pegasos_bound,
    AnsatzConfig, FeatureMapConfig, FeatureMapKind, FeatureMatrix, KernelMatrix, Preset,
    QsvcParams, Result, VariationalModel,
};

use crate::commands::CliError;

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn run_check(name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match body() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(error) => Check { name, passed: false, detail: format!("error: {error}") },
    }
}

fn random_angles(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> FeatureMatrix {
    let data: Vec<f64> =
        (0..rows * cols).map(|_| rng.gen_range(0.0..std::f64::consts::PI)).collect();
    FeatureMatrix::new(rows, cols, data).expect("shape is consistent by construction")
}

/// Two points, kernel K = [[1, -1], [-1, 1]], labels (+1, -1). The dual
/// optimum is α = (1/2, 1/2) with zero bias — solvable by hand from the
/// stationarity condition α₁ = α₂ = 1/(2·2) · (sum of margins).
fn fixture_check() -> Result<(bool, String)> {
    let kernel = KernelMatrix::from_entries(2, vec![1.0, -1.0, -1.0, 1.0])?;
    let labels = [1i8, -1];
    let map = FeatureMapConfig::new(FeatureMapKind::Z, 1);
    let features = FeatureMatrix::new(2, 1, vec![0.0, 1.0])?;
    let params = QsvcParams { c: 10.0, tol: 1e-6, max_passes: 200, seed: 0 };
    let model = train_qsvc(&kernel, &labels, map, features, &params)?;

    let alpha_err =
        (model.alphas[0] - 0.5).abs().max((model.alphas[1] - 0.5).abs());
    let bias_err = model.bias.abs();
    let passed = alpha_err < 1e-6 && bias_err < 1e-6;
    Ok((passed, format!("|α−(0.5,0.5)| = {alpha_err:.2e}, |b| = {bias_err:.2e}")))
}

fn kkt_check(seed: u64) -> Result<(bool, String)> {
    let map = FeatureMapConfig::new(FeatureMapKind::Zz, 2);
    let params = QsvcParams::default();
    let mut worst: f64 = 0.0;
    for problem in 0..3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0xA11CE + problem));
        let features = random_angles(&mut rng, 12, 2);
        let labels: Vec<i8> = (0..12).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        let gram = gram_matrix(&map, &features)?;
        let model = train_qsvc(&gram, &labels, map, features, &params)?;
        worst = worst.max(model.kkt_residual(&gram)?);
    }
    let passed = worst <= params.tol + 1e-12;
    Ok((passed, format!("worst KKT residual {worst:.2e} (tolerance {:.0e})", params.tol)))
}

fn pegasos_check(seed: u64) -> Result<(bool, String)> {
    let map = FeatureMapConfig::new(FeatureMapKind::Zz, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xB0CD);
    let features = random_angles(&mut rng, 10, 2);
    let labels: Vec<i8> = (0..10).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    let gram = gram_matrix(&map, &features)?;

    let mut worst_margin = f64::INFINITY;
    for &lambda in &[0.1, 0.5] {
        for &steps in &[100usize, 300] {
            let report = verify_pegasos_bound(&gram, &labels, lambda, steps, 3, seed)?;
            if !report.holds {
                return Ok((
                    false,
                    format!("bound violated at lambda={lambda}, T={steps}"),
                ));
            }
            worst_margin = worst_margin.min(report.rhs - report.worst_lhs());
        }
    }
    Ok((true, format!("regret bound holds; smallest slack {worst_margin:.3e}")))
}

fn gradient_check(seed: u64) -> Result<(bool, String)> {
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for (instance, &kind) in [FeatureMapKind::Z, FeatureMapKind::Zz, FeatureMapKind::Pauli]
        .iter()
        .enumerate()
    {
        for layers in [1usize, 2] {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (0x6AD + 10 * instance as u64 + layers as u64));
            let map = FeatureMapConfig::new(kind, 2);
            let ansatz = AnsatzConfig::new(2, layers);
            let x = random_angles(&mut rng, 3, 2);
            let y = [1i8, -1, 1];
            let theta: Vec<f64> = (0..ansatz.parameter_count())
                .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect();
            let model = VariationalModel {
                preset: Preset::Vqc,
                feature_map: map,
                ansatz,
                theta,
                history: Vec::new(),
                converged: false,
            };

            let analytic = parameter_shift_gradient(&model, &x, &y)?;
            for i in 0..model.theta.len() {
                let mut plus = model.clone();
                plus.theta[i] += h;
                let mut minus = model.clone();
                minus.theta[i] -= h;
                let numeric =
                    (squared_loss(&plus, &x, &y)? - squared_loss(&minus, &x, &y)?) / (2.0 * h);
                worst = worst.max((analytic[i] - numeric).abs());
            }
        }
    }
    let passed = worst < 1e-6;
    Ok((passed, format!("max |analytic − numeric| = {worst:.2e}")))
}

fn gram_file_check(gram: &KernelMatrix) -> Result<(bool, String)> {
    let violations = gram.fidelity_violations();
    if violations.is_empty() {
        Ok((
            true,
            format!("{}x{} matrix, min eigenvalue {:.3e}", gram.size(), gram.size(), gram.min_eigenvalue()),
        ))
    } else {
        Ok((false, violations.join("; ")))
    }
}

pub fn run(gram: Option<&Path>, seed: u64) -> std::result::Result<(), CliError> {
    let mut checks = vec![
        run_check("svm-two-point-fixture", fixture_check),
        run_check("svm-kkt-residuals", || kkt_check(seed)),
        run_check("pegasos-regret-bound", || pegasos_check(seed)),
        run_check("gradient-shift-vs-finite-difference", || gradient_check(seed)),
    ];
    if let Some(path) = gram {
        // An unreadable or malformed file is the caller's data error
        // (exit 2), not a failed property; only a parsed matrix is audited.
        let matrix = KernelMatrix::read_csv_file(path)?;
        checks.push(run_check("gram-matrix-audit", || gram_file_check(&matrix)));
    }

    let mut failures = 0;
    for check in &checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!("{status}  {}: {}", check.name, check.detail);
        if !check.passed {
            failures += 1;
        }
    }
    if failures > 0 {
        Err(CliError::Verification(format!("{failures} of {} checks failed", checks.len())))
    } else {
        println!("all {} checks passed", checks.len());
        Ok(())
    }
}
