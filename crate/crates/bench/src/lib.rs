//! Shared fixtures for the criterion benches.

use qgenml_core::{FeatureMatrix, FeatureMapConfig, FeatureMapKind};

/// Deterministic pseudo-data in [0, π]: enough structure to avoid
/// degenerate kernels, no RNG dependency.
pub fn angle_grid(rows: usize, cols: usize) -> FeatureMatrix {
    let data: Vec<f64> = (0..rows * cols)
        .map(|i| {
            let t = i as f64 * 0.618_033_988_749_894_8;
            (t - t.floor()) * std::f64::consts::PI
        })
        .collect();
    FeatureMatrix::new(rows, cols, data).expect("consistent dimensions")
}

pub fn zz_map(n_qubits: usize) -> FeatureMapConfig {
    FeatureMapConfig::new(FeatureMapKind::Zz, n_qubits)
}
