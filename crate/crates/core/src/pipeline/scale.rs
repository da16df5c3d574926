//! Per-column affine scaling of features into a rotation-angle range.
//!
//! Default range is [0, π]: the analytic form of the single-qubit encoding
//! kernel is periodic with period π, so wider ranges would let distinct
//! feature values collide in kernel space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feature_matrix::FeatureMatrix;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AngleScaler {
    pub lo: f64,
    pub hi: f64,
    /// Per-column training minima/maxima; equal entries mark a constant
    /// column, which maps to the range midpoint.
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl AngleScaler {
    /// Learns column ranges from training data.
    pub fn fit(x: &FeatureMatrix, lo: f64, hi: f64) -> Result<AngleScaler> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::invalid("range", format!("need lo < hi, got [{lo}, {hi}]")));
        }
        if x.rows() == 0 {
            return Err(Error::EmptyInput("scaler training data"));
        }
        let mut mins = vec![f64::INFINITY; x.cols()];
        let mut maxs = vec![f64::NEG_INFINITY; x.cols()];
        for (i, row) in x.iter_rows().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::invalid(
                        "values",
                        format!("non-finite entry at row {i}, column {j}"),
                    ));
                }
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        Ok(AngleScaler { lo, hi, mins, maxs })
    }

    /// Maps each column's training range onto [lo, hi], clamping values
    /// outside it (unseen test data may overshoot).
    pub fn transform(&self, x: &FeatureMatrix) -> Result<FeatureMatrix> {
        if x.cols() != self.mins.len() {
            return Err(Error::DimensionMismatch { expected: self.mins.len(), got: x.cols() });
        }
        let midpoint = 0.5 * (self.lo + self.hi);
        let mut out = FeatureMatrix::zeros(x.rows(), x.cols());
        for (i, row) in x.iter_rows().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let (min, max) = (self.mins[j], self.maxs[j]);
                let scaled = if max > min {
                    let t = (v - min) / (max - min);
                    (self.lo + t * (self.hi - self.lo)).clamp(self.lo, self.hi)
                } else {
                    midpoint
                };
                out.set(i, j, scaled);
            }
        }
        Ok(out)
    }

    pub fn fit_transform(x: &FeatureMatrix, lo: f64, hi: f64) -> Result<(AngleScaler, FeatureMatrix)> {
        let scaler = AngleScaler::fit(x, lo, hi)?;
        let scaled = scaler.transform(x)?;
        Ok((scaler, scaled))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn affine_map_hits_endpoints_and_midpoint() {
        let x = FeatureMatrix::from_rows(vec![vec![0.0], vec![2.0], vec![4.0]]).unwrap();
        let (_, scaled) = AngleScaler::fit_transform(&x, 0.0, PI).unwrap();
        assert!((scaled.get(0, 0) - 0.0).abs() < 1e-15);
        assert!((scaled.get(1, 0) - PI / 2.0).abs() < 1e-15);
        assert!((scaled.get(2, 0) - PI).abs() < 1e-15);
    }

    #[test]
    fn constant_column_maps_to_midpoint() {
        let x = FeatureMatrix::from_rows(vec![vec![5.0], vec![5.0]]).unwrap();
        let (_, scaled) = AngleScaler::fit_transform(&x, 0.0, PI).unwrap();
        assert_eq!(scaled.get(0, 0), PI / 2.0);
        assert_eq!(scaled.get(1, 0), PI / 2.0);
    }

    #[test]
    fn unseen_data_clamps_to_range() {
        let train = FeatureMatrix::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        let scaler = AngleScaler::fit(&train, 0.0, PI).unwrap();
        let test = FeatureMatrix::from_rows(vec![vec![-3.0], vec![9.0], vec![0.5]]).unwrap();
        let scaled = scaler.transform(&test).unwrap();
        assert_eq!(scaled.get(0, 0), 0.0);
        assert_eq!(scaled.get(1, 0), PI);
        assert!((scaled.get(2, 0) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn output_always_within_range() {
        let train =
            FeatureMatrix::from_rows(vec![vec![1.0, -2.0], vec![3.0, 4.0], vec![2.0, 0.0]])
                .unwrap();
        let (scaler, scaled) = AngleScaler::fit_transform(&train, 0.25, 1.75).unwrap();
        for row in scaled.iter_rows() {
            for &v in row {
                assert!((0.25..=1.75).contains(&v));
            }
        }
        let shifted = FeatureMatrix::from_rows(vec![vec![100.0, -100.0]]).unwrap();
        for &v in scaler.transform(&shifted).unwrap().row(0) {
            assert!((0.25..=1.75).contains(&v));
        }
    }

    #[test]
    fn degenerate_range_rejected() {
        let x = FeatureMatrix::from_rows(vec![vec![0.0]]).unwrap();
        assert!(AngleScaler::fit(&x, 1.0, 1.0).is_err());
        assert!(AngleScaler::fit(&x, 2.0, 1.0).is_err());
    }

    #[test]
    fn non_finite_input_rejected() {
        let x = FeatureMatrix::from_rows(vec![vec![f64::NAN]]).unwrap();
        assert!(AngleScaler::fit(&x, 0.0, 1.0).is_err());
    }

    #[test]
    fn scaler_round_trips_through_json() {
        let x = FeatureMatrix::from_rows(vec![vec![0.0, 1.0], vec![2.0, 3.0]]).unwrap();
        let scaler = AngleScaler::fit(&x, 0.0, PI).unwrap();
        let json = serde_json::to_string(&scaler).unwrap();
        let back: AngleScaler = serde_json::from_str(&json).unwrap();
        assert_eq!(scaler.mins, back.mins);
        assert_eq!(scaler.maxs, back.maxs);
    }
}
