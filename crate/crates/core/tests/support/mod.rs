//! Independent reference implementations ("oracles") for integration tests.
//!
//! Everything here recomputes results by a different route than the library
//! under test: gates become explicit 2^n × 2^n matrices, the SVM dual is
//! maximized by brute-force grid search, gradients by central finite
//! differences, AUROC by an explicit pairwise tally. Keep these free of the
//! library's own shortcuts — their value is that they can disagree.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use qgenml_core::{AngleConvention, Circuit, Gate, KernelMatrix, Statevector};

/// Dense per-gate unitary, full 2^n dimension, no stride tricks.
pub fn gate_unitary(n_qubits: usize, gate: &Gate) -> Vec<Vec<Complex64>> {
    let dim = 1usize << n_qubits;
    let mut u = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    let targets = gate.targets();
    match targets.len() {
        1 => {
            let m = single_qubit_matrix(gate);
            let t = targets[0];
            for b in 0..dim {
                let in_bit = (b >> t) & 1;
                for (out_bit, row) in m.iter().enumerate() {
                    let out = (b & !(1usize << t)) | (out_bit << t);
                    u[out][b] += row[in_bit];
                }
            }
        }
        2 => {
            let m = two_qubit_matrix(gate);
            let (q1, q0) = (targets[0], targets[1]);
            for b in 0..dim {
                let in2 = (((b >> q1) & 1) << 1) | ((b >> q0) & 1);
                for (out2, row) in m.iter().enumerate() {
                    let cleared = b & !(1usize << q1) & !(1usize << q0);
                    let out = cleared | ((out2 >> 1) << q1) | ((out2 & 1) << q0);
                    u[out][b] += row[in2];
                }
            }
        }
        _ => unreachable!("no gates with more than two targets"),
    }
    u
}

fn single_qubit_matrix(gate: &Gate) -> [[Complex64; 2]; 2] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match *gate {
        Gate::H { .. } => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]
        }
        Gate::Rx { angle, convention, .. } => {
            let phi = convention.effective(angle);
            [
                [c(phi.cos(), 0.0), c(0.0, -phi.sin())],
                [c(0.0, -phi.sin()), c(phi.cos(), 0.0)],
            ]
        }
        Gate::Ry { angle, convention, .. } => {
            let phi = convention.effective(angle);
            [
                [c(phi.cos(), 0.0), c(-phi.sin(), 0.0)],
                [c(phi.sin(), 0.0), c(phi.cos(), 0.0)],
            ]
        }
        Gate::Rz { angle, convention, .. } => {
            let phi = convention.effective(angle);
            [
                [Complex64::from_polar(1.0, -phi), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, phi)],
            ]
        }
        _ => unreachable!("not a single-qubit gate"),
    }
}

/// 4×4 matrix in the basis |q1 q0⟩ with q1 the first-listed qubit.
fn two_qubit_matrix(gate: &Gate) -> [[Complex64; 4]; 4] {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut m = [[zero; 4]; 4];
    match *gate {
        Gate::Cnot { .. } => {
            // q1 = control, q0 = target.
            for bc in 0..2usize {
                for bt in 0..2usize {
                    m[(bc << 1) | (bt ^ bc)][(bc << 1) | bt] = one;
                }
            }
        }
        Gate::Cz { .. } => {
            for i in 0..4 {
                m[i][i] = if i == 3 { -one } else { one };
            }
        }
        Gate::Rzz { angle, convention, .. } => {
            let phi = convention.effective(angle);
            for i in 0..4usize {
                let parity = ((i >> 1) ^ i) & 1;
                let sign = if parity == 0 { -1.0 } else { 1.0 };
                m[i][i] = Complex64::from_polar(1.0, sign * phi);
            }
        }
        Gate::Rzx { angle, convention, .. } => {
            // q1 = Z qubit, q0 = X qubit: cos φ I − i sin φ (Z ⊗ X).
            let phi = convention.effective(angle);
            for bz in 0..2usize {
                let z_sign = if bz == 0 { 1.0 } else { -1.0 };
                for bx in 0..2usize {
                    let i = (bz << 1) | bx;
                    m[i][i] = Complex64::new(phi.cos(), 0.0);
                    m[(bz << 1) | (bx ^ 1)][i] = Complex64::new(0.0, -z_sign * phi.sin());
                }
            }
        }
        _ => unreachable!("not a two-qubit gate"),
    }
    m
}

/// Runs a circuit by explicit matrix–vector products.
pub fn run_circuit_dense(circuit: &Circuit, initial: &Statevector) -> Vec<Complex64> {
    let mut state: Vec<Complex64> = initial.amplitudes().to_vec();
    for gate in circuit.gates() {
        let u = gate_unitary(circuit.n_qubits(), gate);
        let mut next = vec![Complex64::new(0.0, 0.0); state.len()];
        for (out, row) in u.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (col, amp) in row.iter().zip(&state) {
                acc += col * amp;
            }
            next[out] = acc;
        }
        state = next;
    }
    state
}

/// A random circuit drawing uniformly from every gate kind, both angle
/// conventions, angles in [−2π, 2π].
pub fn random_circuit(rng: &mut ChaCha8Rng, n_qubits: usize, n_gates: usize) -> Circuit {
    let mut gates = Vec::with_capacity(n_gates);
    for _ in 0..n_gates {
        let angle = rng.gen_range(-2.0 * std::f64::consts::PI..=2.0 * std::f64::consts::PI);
        let convention = if rng.gen_bool(0.5) {
            AngleConvention::Full
        } else {
            AngleConvention::Half
        };
        let target = rng.gen_range(0..n_qubits);
        let other = if n_qubits > 1 {
            let mut o = rng.gen_range(0..n_qubits - 1);
            if o >= target {
                o += 1;
            }
            o
        } else {
            target
        };
        let kind_count = if n_qubits > 1 { 8 } else { 4 };
        let gate = match rng.gen_range(0..kind_count) {
            0 => Gate::H { target },
            1 => Gate::Rx { target, angle, convention },
            2 => Gate::Ry { target, angle, convention },
            3 => Gate::Rz { target, angle, convention },
            4 => Gate::Cnot { control: target, target: other },
            5 => Gate::Cz { a: target, b: other },
            6 => Gate::Rzz { a: target, b: other, angle, convention },
            _ => Gate::Rzx { z_qubit: target, x_qubit: other, angle, convention },
        };
        gates.push(gate);
    }
    Circuit::new(n_qubits, gates).expect("generated gates are valid")
}

/// Largest |implementation − oracle| amplitude difference after running a
/// circuit both ways from |0…0⟩.
pub fn max_amplitude_deviation(circuit: &Circuit) -> f64 {
    let initial = Statevector::zero(circuit.n_qubits()).unwrap();
    let fast = qgenml_core::run_circuit(circuit, &initial).unwrap();
    let dense = run_circuit_dense(circuit, &initial);
    fast.amplitudes()
        .iter()
        .zip(&dense)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max)
}

/// Brute-force maximizer of the SVM dual Σαᵢ − ½ΣΣ αᵢαⱼyᵢyⱼK(i,j) over the
/// grid {0, C/steps, …, C}^m restricted to Σαᵢyᵢ = 0 (within half a grid
/// cell). Exponential in m — keep m ≤ 4.
pub fn grid_search_dual(
    kernel: &KernelMatrix,
    labels: &[i8],
    c: f64,
    steps: usize,
) -> (Vec<f64>, f64) {
    let m = labels.len();
    assert!(m <= 4, "grid search oracle is exponential; got m = {m}");
    let cell = c / steps as f64;
    let mut best = (vec![0.0; m], f64::NEG_INFINITY);
    let mut alphas = vec![0usize; m];
    loop {
        let a: Vec<f64> = alphas.iter().map(|&k| k as f64 * cell).collect();
        let balance: f64 = a
            .iter()
            .zip(labels)
            .map(|(&ai, &yi)| ai * f64::from(yi))
            .sum();
        if balance.abs() < 0.5 * cell {
            let value = dual_value(&a, kernel, labels);
            if value > best.1 {
                best = (a, value);
            }
        }
        // Odometer increment over the m-dimensional grid.
        let mut i = 0;
        loop {
            if i == m {
                return best;
            }
            alphas[i] += 1;
            if alphas[i] <= steps {
                break;
            }
            alphas[i] = 0;
            i += 1;
        }
    }
}

pub fn dual_value(alphas: &[f64], kernel: &KernelMatrix, labels: &[i8]) -> f64 {
    let m = labels.len();
    let mut value: f64 = alphas.iter().sum();
    for i in 0..m {
        for j in 0..m {
            value -= 0.5
                * alphas[i]
                * alphas[j]
                * f64::from(labels[i])
                * f64::from(labels[j])
                * kernel.get(i, j);
        }
    }
    value
}

/// Exact optimum of the bias-free kernel SVM dual (no Σαy = 0 constraint)
/// by cyclic coordinate ascent on max Σα − ½ αᵀ(y∘K∘y)α over [0, C]^m.
/// Each coordinate update is a closed-form box clip, so this converges to
/// the unique maximum for PSD kernels. The returned α doubles as the
/// coefficient vector of the primal minimizer w = Σ αᵢyᵢφᵢ.
pub fn no_bias_dual_ascent(
    kernel: &KernelMatrix,
    labels: &[i8],
    c: f64,
    sweeps: usize,
) -> Vec<f64> {
    let m = labels.len();
    let mut alphas = vec![0.0f64; m];
    for _ in 0..sweeps {
        let mut largest_move = 0.0f64;
        for i in 0..m {
            let f_i: f64 = (0..m)
                .map(|j| alphas[j] * f64::from(labels[j]) * kernel.get(i, j))
                .sum();
            let k_ii = kernel.get(i, i).max(1e-12);
            let step = (1.0 - f64::from(labels[i]) * f_i) / k_ii;
            let updated = (alphas[i] + step).clamp(0.0, c);
            largest_move = largest_move.max((updated - alphas[i]).abs());
            alphas[i] = updated;
        }
        if largest_move < 1e-14 {
            break;
        }
    }
    alphas
}

/// Central finite-difference gradient of `f` at `theta`.
pub fn finite_difference_gradient(
    f: impl Fn(&[f64]) -> f64,
    theta: &[f64],
    h: f64,
) -> Vec<f64> {
    let mut shifted = theta.to_vec();
    let mut grad = Vec::with_capacity(theta.len());
    for i in 0..theta.len() {
        let original = shifted[i];
        shifted[i] = original + h;
        let plus = f(&shifted);
        shifted[i] = original - h;
        let minus = f(&shifted);
        shifted[i] = original;
        grad.push((plus - minus) / (2.0 * h));
    }
    grad
}

/// AUROC by explicit positive–negative pair comparison, ties ½. The
/// numerator counts half-wins as integers so the result is bit-exact.
pub fn auroc_pairwise(scores: &[f64], labels: &[i8]) -> f64 {
    let mut half_wins: i64 = 0;
    let mut positives: i64 = 0;
    let mut negatives: i64 = 0;
    for (&sp, &yp) in scores.iter().zip(labels) {
        if yp != 1 {
            continue;
        }
        positives += 1;
        for (&sn, &yn) in scores.iter().zip(labels) {
            if yn == 1 {
                continue;
            }
            if sp > sn {
                half_wins += 2;
            } else if sp == sn {
                half_wins += 1;
            }
        }
    }
    negatives += labels.iter().filter(|&&y| y != 1).count() as i64;
    half_wins as f64 / (2 * positives * negatives) as f64
}
