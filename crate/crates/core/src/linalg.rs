//! Symmetric eigendecomposition via the cyclic Jacobi method.
//!
//! Jacobi is slow compared to tridiagonalization-based solvers but is exact
//! enough, simple to audit, and fully deterministic, which matters because
//! eigenvalues feed both PCA and the positive-semidefiniteness checks on
//! kernel matrices. Matrices here are small (feature covariances and Gram
//! matrices of at most a few hundred rows).

/// Eigenvalues in descending order with matching eigenvectors.
/// `vectors[k]` is the unit eigenvector for `values[k]`.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Decomposes a symmetric matrix given in row-major order.
///
/// The input is symmetrized as (A + Aᵀ)/2 first so that tiny asymmetries
/// from accumulation order cannot stall the sweep. Panics if `data` is not
/// n*n long.
pub fn symmetric_eigen(data: &[f64], n: usize) -> SymmetricEigen {
    assert_eq!(data.len(), n * n, "matrix data must be n*n");
    if n == 0 {
        return SymmetricEigen { values: vec![], vectors: vec![] };
    }

    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (data[i * n + j] + data[j * n + i]);
        }
    }
    // v starts as the identity; its columns accumulate the eigenvectors.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let scale = frobenius(&a).max(f64::MIN_POSITIVE);
    let tol = 1e-15 * scale;
    const MAX_SWEEPS: usize = 100;

    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a, n);
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= tol / (n as f64) {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Rotation angle from the standard Jacobi formulas.
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Descending by eigenvalue; ties keep the lower column index first so
    // the output is deterministic.
    order.sort_by(|&i, &j| {
        a[j * n + j]
            .partial_cmp(&a[i * n + i])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });

    let values = order.iter().map(|&k| a[k * n + k]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|row| v[row * n + k]).collect())
        .collect();
    SymmetricEigen { values, vectors }
}

/// Smallest eigenvalue of a symmetric matrix; used for PSD checks.
pub fn min_eigenvalue(data: &[f64], n: usize) -> f64 {
    symmetric_eigen(data, n)
        .values
        .last()
        .copied()
        .unwrap_or(0.0)
}

fn frobenius(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j] * a[i * n + j];
            }
        }
    }
    sum.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_returns_sorted_diagonal() {
        let a = vec![2.0, 0.0, 0.0, 0.0, 5.0, 0.0, 0.0, 0.0, -1.0];
        let eig = symmetric_eigen(&a, 3);
        assert!((eig.values[0] - 5.0).abs() < 1e-12);
        assert!((eig.values[1] - 2.0).abs() < 1e-12);
        assert!((eig.values[2] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_hand_check() {
        // [[2,1],[1,2]] has eigenvalues 3 and 1 with vectors (1,1)/√2, (1,-1)/√2.
        let eig = symmetric_eigen(&[2.0, 1.0, 1.0, 2.0], 2);
        assert!((eig.values[0] - 3.0).abs() < 1e-12);
        assert!((eig.values[1] - 1.0).abs() < 1e-12);
        let v0 = &eig.vectors[0];
        assert!((v0[0].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((v0[0] - v0[1]).abs() < 1e-12);
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        // Fixed non-trivial symmetric matrix.
        let a = vec![
            4.0, 1.0, -2.0, 0.5, //
            1.0, 3.0, 0.0, -1.0, //
            -2.0, 0.0, 1.0, 0.3, //
            0.5, -1.0, 0.3, 2.0,
        ];
        let eig = symmetric_eigen(&a, 4);
        for i in 0..4 {
            for j in 0..4 {
                let dot: f64 = eig.vectors[i]
                    .iter()
                    .zip(&eig.vectors[j])
                    .map(|(x, y)| x * y)
                    .sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-10, "i={i} j={j} dot={dot}");
            }
        }
        // A v = λ v for each pair.
        for k in 0..4 {
            for row in 0..4 {
                let av: f64 = (0..4).map(|c| a[row * 4 + c] * eig.vectors[k][c]).sum();
                assert!((av - eig.values[k] * eig.vectors[k][row]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn min_eigenvalue_of_psd_matrix_is_nonnegative() {
        // Gram matrix of vectors (1,0), (1,1), (0,2) is PSD by construction.
        let g = vec![1.0, 1.0, 0.0, 1.0, 2.0, 2.0, 0.0, 2.0, 4.0];
        assert!(min_eigenvalue(&g, 3) > -1e-12);
    }
}
