//! Fidelity kernels from encoded states.
//!
//! The kernel between two feature vectors is the state fidelity
//! K(x, y) = |⟨φ(x)|φ(y)⟩|², where φ is the encoding circuit applied to
//! |0...0⟩. Fidelity is real, symmetric, bounded by [0, 1], and yields a
//! positive semidefinite Gram matrix, so the downstream solvers can consume
//! it like any classical kernel.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::feature_map::{encode, FeatureMapConfig};
use crate::feature_matrix::FeatureMatrix;
use crate::linalg;
use crate::statevector::{inner_product, Statevector};

/// Square matrix of kernel values, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelMatrix {
    size: usize,
    entries: Vec<f64>,
}

/// Tolerances for the fidelity Gram-matrix invariants.
pub const SYMMETRY_TOL: f64 = 1e-10;
pub const DIAGONAL_TOL: f64 = 1e-10;
pub const ENTRY_RANGE_TOL: f64 = 1e-9;
pub const PSD_TOL: f64 = 1e-8;

impl KernelMatrix {
    pub fn from_entries(size: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::DimensionMismatch { expected: size * size, got: entries.len() });
        }
        Ok(KernelMatrix { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.entries, self.size)
    }

    /// Checks the invariants a fidelity Gram matrix must satisfy: symmetry,
    /// unit diagonal, entries within [0, 1], and positive semidefiniteness.
    /// Returns one message per violated invariant.
    pub fn fidelity_violations(&self) -> Vec<String> {
        let mut violations = Vec::new();
        let n = self.size;
        let mut max_asym: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                max_asym = max_asym.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        if max_asym > SYMMETRY_TOL {
            violations.push(format!("asymmetry {max_asym:.3e} exceeds {SYMMETRY_TOL:.0e}"));
        }
        let mut max_diag_err: f64 = 0.0;
        for i in 0..n {
            max_diag_err = max_diag_err.max((self.get(i, i) - 1.0).abs());
        }
        if max_diag_err > DIAGONAL_TOL {
            violations.push(format!(
                "diagonal deviates from 1 by {max_diag_err:.3e}, allowed {DIAGONAL_TOL:.0e}"
            ));
        }
        for (idx, &v) in self.entries.iter().enumerate() {
            if !(-ENTRY_RANGE_TOL..=1.0 + ENTRY_RANGE_TOL).contains(&v) {
                violations.push(format!(
                    "entry ({}, {}) = {v} outside [0, 1]",
                    idx / n,
                    idx % n
                ));
                break;
            }
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -PSD_TOL {
            violations.push(format!(
                "smallest eigenvalue {min_eig:.3e} below -{PSD_TOL:.0e}, matrix not PSD"
            ));
        }
        violations
    }

    /// Writes the matrix as CSV: a header of column indices, then one row
    /// per line prefixed with its row index. Values carry 17 significant
    /// digits so they round-trip bit-exactly.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "index")?;
        for j in 0..self.size {
            write!(out, ",{j}")?;
        }
        writeln!(out)?;
        for i in 0..self.size {
            write!(out, "{i}")?;
            for j in 0..self.size {
                write!(out, ",{:.16e}", self.get(i, j))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)
            .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        self.write_csv(std::io::BufWriter::new(file))
            .map_err(|source| Error::Io { path: path.display().to_string(), source })
    }

    /// Reads a matrix written by [`KernelMatrix::write_csv`].
    pub fn read_csv_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        let path_str = path.display().to_string();
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::data(&path_str, 1, "empty file"))?;
        let mut header_fields = header.split(',');
        if header_fields.next().map(str::trim) != Some("index") {
            return Err(Error::data(
                &path_str,
                1,
                "not a kernel-matrix CSV: header must start with \"index\"",
            ));
        }
        let size = header_fields.count();
        if size == 0 {
            return Err(Error::data(&path_str, 1, "header has no column indices"));
        }
        let mut entries = Vec::with_capacity(size * size);
        let mut rows = 0usize;
        for (line_idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let index = fields.next().map(str::trim);
            if index != Some(rows.to_string().as_str()) {
                return Err(Error::data(
                    &path_str,
                    line_idx as u64 + 1,
                    format!("row index column should read {rows}, found {index:?}"),
                ));
            }
            let mut count = 0usize;
            for field in fields {
                let v: f64 = field.trim().parse().map_err(|_| {
                    Error::data(&path_str, line_idx as u64 + 1, format!("bad number {field:?}"))
                })?;
                entries.push(v);
                count += 1;
            }
            if count != size {
                return Err(Error::data(
                    &path_str,
                    line_idx as u64 + 1,
                    format!("expected {size} values, found {count}"),
                ));
            }
            rows += 1;
        }
        if rows != size {
            return Err(Error::data(
                &path_str,
                1,
                format!("header promises {size} rows, file has {rows}"),
            ));
        }
        KernelMatrix::from_entries(size, entries)
    }
}

/// Kernel value for a single pair of feature vectors.
pub fn kernel_entry(config: &FeatureMapConfig, x: &[f64], y: &[f64]) -> Result<f64> {
    let phi_x = encode(config, x)?;
    let phi_y = encode(config, y)?;
    fidelity(&phi_x, &phi_y)
}

fn fidelity(a: &Statevector, b: &Statevector) -> Result<f64> {
    Ok(inner_product(a, b)?.norm_sqr())
}

/// Gram matrix over the rows of `x`.
///
/// Each row is encoded once and cached (m state preparations for an m×m
/// matrix); only the upper triangle is computed and then mirrored, so the
/// result is symmetric by construction. Rows are processed in parallel but
/// each entry is pure arithmetic on cached states, so the output is
/// deterministic regardless of thread count.
pub fn gram_matrix(config: &FeatureMapConfig, x: &FeatureMatrix) -> Result<KernelMatrix> {
    if x.rows() == 0 {
        return Err(Error::EmptyInput("gram matrix input"));
    }
    let states = encode_rows(config, x)?;
    let m = states.len();
    let upper: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (i..m)
                .map(|j| fidelity(&states[i], &states[j]).expect("states share qubit width"))
                .collect()
        })
        .collect();
    let mut entries = vec![0.0; m * m];
    for (i, row) in upper.iter().enumerate() {
        for (offset, &v) in row.iter().enumerate() {
            let j = i + offset;
            entries[i * m + j] = v;
            entries[j * m + i] = v;
        }
    }
    KernelMatrix::from_entries(m, entries)
}

/// Rectangular kernel block between test rows and train rows:
/// entry (t, i) = K(test_t, train_i). Returned as a FeatureMatrix of shape
/// (test rows) × (train rows).
pub fn cross_gram(
    config: &FeatureMapConfig,
    test: &FeatureMatrix,
    train: &FeatureMatrix,
) -> Result<FeatureMatrix> {
    if test.rows() == 0 || train.rows() == 0 {
        return Err(Error::EmptyInput("cross gram input"));
    }
    let test_states = encode_rows(config, test)?;
    let train_states = encode_rows(config, train)?;
    let rows: Vec<Vec<f64>> = test_states
        .par_iter()
        .map(|t| {
            train_states
                .iter()
                .map(|s| fidelity(t, s).expect("states share qubit width"))
                .collect()
        })
        .collect();
    FeatureMatrix::from_rows(rows)
}

fn encode_rows(config: &FeatureMapConfig, x: &FeatureMatrix) -> Result<Vec<Statevector>> {
    if x.cols() != config.n_qubits {
        return Err(Error::DimensionMismatch { expected: config.n_qubits, got: x.cols() });
    }
    (0..x.rows())
        .into_par_iter()
        .map(|i| encode(config, x.row(i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feature_map::FeatureMapKind;

    #[test]
    fn single_row_gram_is_one() {
        let config = FeatureMapConfig::new(FeatureMapKind::Z, 2);
        let x = FeatureMatrix::from_rows(vec![vec![0.3, 1.2]]).unwrap();
        let k = gram_matrix(&config, &x).unwrap();
        assert_eq!(k.size(), 1);
        assert!((k.get(0, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_entry_is_symmetric_and_bounded() {
        let config = FeatureMapConfig::new(FeatureMapKind::Pauli, 2);
        let a = [0.4, 2.0];
        let b = [1.3, 0.2];
        let kab = kernel_entry(&config, &a, &b).unwrap();
        let kba = kernel_entry(&config, &b, &a).unwrap();
        assert!((kab - kba).abs() < 1e-12);
        assert!((0.0..=1.0 + 1e-12).contains(&kab));
    }

    #[test]
    fn one_qubit_z_kernel_is_squared_cosine() {
        let config = FeatureMapConfig::new(FeatureMapKind::Z, 1);
        for (x, y) in [(0.0, 0.5), (1.2, -0.4), (2.8, 2.8)] {
            let k = kernel_entry(&config, &[x], &[y]).unwrap();
            let expected = (x - y).cos().powi(2);
            assert!((k - expected).abs() < 1e-12, "x={x} y={y}");
        }
    }

    #[test]
    fn pairwise_entries_match_batched_gram_exactly() {
        let config = FeatureMapConfig::new(FeatureMapKind::Zz, 3);
        let rows = vec![
            vec![0.1, 0.5, 2.2],
            vec![1.7, 0.9, 0.3],
            vec![2.9, 1.1, 1.4],
        ];
        let x = FeatureMatrix::from_rows(rows.clone()).unwrap();
        let k = gram_matrix(&config, &x).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let single = kernel_entry(&config, &rows[i], &rows[j]).unwrap();
                // Same arithmetic path, so bit-for-bit equality is expected.
                assert_eq!(single, k.get(i.min(j), i.max(j)), "i={i} j={j}");
            }
        }
    }

    #[test]
    fn cross_gram_hand_values() {
        let config = FeatureMapConfig::new(FeatureMapKind::Z, 1);
        let train = FeatureMatrix::from_rows(vec![vec![0.0]]).unwrap();
        let test = FeatureMatrix::from_rows(vec![
            vec![std::f64::consts::FRAC_PI_2],
            vec![std::f64::consts::PI],
        ])
        .unwrap();
        let k = cross_gram(&config, &test, &train).unwrap();
        assert_eq!((k.rows(), k.cols()), (2, 1));
        assert!(k.get(0, 0).abs() < 1e-12);
        assert!((k.get(1, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_violations_flags_corruption() {
        let good = KernelMatrix::from_entries(2, vec![1.0, 0.5, 0.5, 1.0]).unwrap();
        assert!(good.fidelity_violations().is_empty());

        let asym = KernelMatrix::from_entries(2, vec![1.0, 0.5, 0.1, 1.0]).unwrap();
        assert!(!asym.fidelity_violations().is_empty());

        // Off-diagonal 2.0 breaks both the range and PSD invariants.
        let wild = KernelMatrix::from_entries(2, vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        let violations = wild.fidelity_violations();
        assert!(violations.iter().any(|v| v.contains("outside")));
        assert!(violations.iter().any(|v| v.contains("not PSD")));
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let config = FeatureMapConfig::new(FeatureMapKind::Pauli, 2);
        let x = FeatureMatrix::from_rows(vec![
            vec![0.123456789012345, 2.71],
            vec![1.0, 0.577],
            vec![3.0, 0.1],
        ])
        .unwrap();
        let k = gram_matrix(&config, &x).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gram.csv");
        k.write_csv_file(&path).unwrap();
        let back = KernelMatrix::read_csv_file(&path).unwrap();
        assert_eq!(k, back);
    }

    #[test]
    fn mismatched_feature_width_rejected() {
        let config = FeatureMapConfig::new(FeatureMapKind::Z, 3);
        let x = FeatureMatrix::from_rows(vec![vec![0.1, 0.2]]).unwrap();
        assert!(matches!(
            gram_matrix(&config, &x),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn csv_reader_rejects_foreign_layouts() {
        let dir = tempfile::tempdir().unwrap();

        // Headerless numbers must not be reinterpreted as a smaller matrix.
        let headerless = dir.path().join("headerless.csv");
        std::fs::write(&headerless, "1.0,0.5\n0.5,1.0\n").unwrap();
        assert!(matches!(
            KernelMatrix::read_csv_file(&headerless),
            Err(Error::DataFormat { .. })
        ));

        // A shuffled index column means the file is not what we wrote.
        let shuffled = dir.path().join("shuffled.csv");
        std::fs::write(&shuffled, "index,0,1\n1,1.0,0.5\n0,0.5,1.0\n").unwrap();
        assert!(matches!(
            KernelMatrix::read_csv_file(&shuffled),
            Err(Error::DataFormat { .. })
        ));
    }
}
