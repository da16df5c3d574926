//! Principal component analysis down to a fixed four dimensions.
//!
//! Fitting centers the columns and takes the top four eigenvectors of the
//! sample covariance. When there are more columns than rows the
//! eigenproblem is solved on the m×m Gram matrix instead and mapped back,
//! which gives identical components at a fraction of the cost (k-mer
//! matrices are 4^k wide). If fewer than four directions carry variance,
//! the remaining components are padded with arbitrary orthonormal axes and
//! the model is flagged `rank_deficient`.
//!
//! Sign convention: each component's largest-magnitude coordinate is made
//! positive (first such coordinate on ties), so scores are reproducible
//! across runs and platforms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feature_matrix::FeatureMatrix;
use crate::linalg::symmetric_eigen;

/// Output dimensionality of the reduction; downstream circuits assume it.
pub const PCA_DIMS: usize = 4;

/// Relative eigenvalue cutoff below which a direction counts as zero
/// variance.
const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// Orthonormal rows, `PCA_DIMS` × d.
    pub components: Vec<Vec<f64>>,
    /// Covariance eigenvalues of the kept directions, descending; padded
    /// directions report 0.
    pub explained_variance: Vec<f64>,
    /// True when the data had rank < `PCA_DIMS` and components were padded.
    pub rank_deficient: bool,
}

pub fn pca_fit(x: &FeatureMatrix) -> Result<PcaModel> {
    let (m, d) = (x.rows(), x.cols());
    if m < 5 {
        return Err(Error::invalid("rows", format!("need at least 5 samples, got {m}")));
    }
    if d < PCA_DIMS {
        return Err(Error::invalid("cols", format!("need at least {PCA_DIMS} columns, got {d}")));
    }
    for (i, row) in x.iter_rows().enumerate() {
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("values", format!("non-finite entry in row {i}")));
        }
    }

    let mut mean = vec![0.0; d];
    for row in x.iter_rows() {
        for (m_j, v) in mean.iter_mut().zip(row) {
            *m_j += v;
        }
    }
    for m_j in &mut mean {
        *m_j /= m as f64;
    }

    // Centered data, row-major.
    let centered: Vec<f64> = x
        .iter_rows()
        .flat_map(|row| row.iter().zip(&mean).map(|(v, mu)| v - mu))
        .collect();
    let denom = (m - 1) as f64;

    let (mut eigenvalues, mut directions): (Vec<f64>, Vec<Vec<f64>>) = if d <= m {
        // Covariance route: eigen of the d×d matrix BᵀB / (m−1).
        let mut cov = vec![0.0; d * d];
        for row in centered.chunks_exact(d) {
            for (j, &vj) in row.iter().enumerate() {
                for (l, &vl) in row.iter().enumerate().skip(j) {
                    cov[j * d + l] += vj * vl;
                }
            }
        }
        for j in 0..d {
            for l in j..d {
                let v = cov[j * d + l] / denom;
                cov[j * d + l] = v;
                cov[l * d + j] = v;
            }
        }
        let eigen = symmetric_eigen(&cov, d);
        (eigen.values, eigen.vectors)
    } else {
        // Gram route: eigen of the m×m matrix BBᵀ / (m−1); a unit
        // eigenvector u with value λ > 0 maps to the covariance
        // eigenvector Bᵀu / √(λ(m−1)).
        let mut gram = vec![0.0; m * m];
        for i in 0..m {
            let ri = &centered[i * d..(i + 1) * d];
            for j in i..m {
                let rj = &centered[j * d..(j + 1) * d];
                let dot: f64 = ri.iter().zip(rj).map(|(a, b)| a * b).sum();
                gram[i * m + j] = dot / denom;
                gram[j * m + i] = gram[i * m + j];
            }
        }
        let eigen = symmetric_eigen(&gram, m);
        let scale = |lambda: f64| (lambda * denom).sqrt();
        let mut values = Vec::new();
        let mut vectors = Vec::new();
        for (lambda, u) in eigen.values.iter().zip(&eigen.vectors) {
            if *lambda <= 0.0 {
                break; // descending order: nothing usable past here
            }
            let norm = scale(*lambda);
            let mut v = vec![0.0; d];
            for (i, &ui) in u.iter().enumerate() {
                let row = &centered[i * d..(i + 1) * d];
                for (vj, &rj) in v.iter_mut().zip(row) {
                    *vj += ui * rj / norm;
                }
            }
            values.push(*lambda);
            vectors.push(v);
        }
        (values, vectors)
    };

    let max_value = eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let cutoff = max_value * RANK_TOL;
    let rank = eigenvalues
        .iter()
        .take(PCA_DIMS)
        .filter(|&&v| v > cutoff && v > 0.0)
        .count();
    eigenvalues.truncate(rank);
    directions.truncate(rank);

    let rank_deficient = rank < PCA_DIMS;
    if rank_deficient {
        pad_orthonormal(&mut directions, d);
        eigenvalues.resize(PCA_DIMS, 0.0);
    } else {
        eigenvalues.truncate(PCA_DIMS);
        directions.truncate(PCA_DIMS);
    }

    for row in &mut directions {
        fix_sign(row);
    }

    Ok(PcaModel {
        mean,
        components: directions,
        explained_variance: eigenvalues.iter().map(|&v| v.max(0.0)).collect(),
        rank_deficient,
    })
}

/// Extends `rows` with standard-basis vectors orthogonalized against what's
/// already there, until `PCA_DIMS` rows exist.
fn pad_orthonormal(rows: &mut Vec<Vec<f64>>, d: usize) {
    let mut candidate = 0usize;
    while rows.len() < PCA_DIMS && candidate < d {
        let mut v = vec![0.0; d];
        v[candidate] = 1.0;
        candidate += 1;
        for row in rows.iter() {
            let dot: f64 = v.iter().zip(row).map(|(a, b)| a * b).sum();
            for (vj, rj) in v.iter_mut().zip(row) {
                *vj -= dot * rj;
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for vj in &mut v {
                *vj /= norm;
            }
            rows.push(v);
        }
    }
    assert!(rows.len() == PCA_DIMS, "could not complete an orthonormal basis");
}

fn fix_sign(row: &mut [f64]) {
    let mut best = 0usize;
    for (j, v) in row.iter().enumerate() {
        if v.abs() > row[best].abs() {
            best = j;
        }
    }
    if row[best] < 0.0 {
        for v in row.iter_mut() {
            *v = -*v;
        }
    }
}

pub fn pca_transform(model: &PcaModel, x: &FeatureMatrix) -> Result<FeatureMatrix> {
    let d = model.mean.len();
    if x.cols() != d {
        return Err(Error::DimensionMismatch { expected: d, got: x.cols() });
    }
    let mut out = FeatureMatrix::zeros(x.rows(), PCA_DIMS);
    for (i, row) in x.iter_rows().enumerate() {
        for (j, component) in model.components.iter().enumerate() {
            let score: f64 = row
                .iter()
                .zip(&model.mean)
                .zip(component)
                .map(|((v, mu), c)| (v - mu) * c)
                .sum();
            out.set(i, j, score);
        }
    }
    Ok(out)
}
