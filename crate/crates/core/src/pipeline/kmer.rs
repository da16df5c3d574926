//! k-mer frequency vectorization.
//!
//! Each sequence becomes a row of 4^k columns, one per k-mer over
//! {A, C, G, T} in lexicographic order (A < C < G < T). An entry is the
//! number of windows matching that k-mer divided by the total window count
//! (len − k + 1). Windows containing N are skipped but still count toward
//! the denominator, so rows sum to 1 exactly when the sequence is N-free.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::feature_matrix::FeatureMatrix;
use crate::pipeline::dataset::RawDataset;

pub const MAX_K: usize = 8;

fn base_index(ch: u8) -> Option<usize> {
    match ch {
        b'A' => Some(0),
        b'C' => Some(1),
        b'G' => Some(2),
        b'T' => Some(3),
        _ => None,
    }
}

fn kmer_row(sequence: &str, k: usize) -> Vec<f64> {
    let bytes = sequence.as_bytes();
    let n_windows = bytes.len() - k + 1;
    let mut counts = vec![0u32; 1 << (2 * k)];
    'windows: for window in bytes.windows(k) {
        let mut index = 0usize;
        for &ch in window {
            match base_index(ch) {
                Some(b) => index = (index << 2) | b,
                None => continue 'windows, // N anywhere voids the window
            }
        }
        counts[index] += 1;
    }
    let denom = n_windows as f64;
    counts.into_iter().map(|c| f64::from(c) / denom).collect()
}

pub fn vectorize_kmers(dataset: &RawDataset, k: usize) -> Result<FeatureMatrix> {
    if k == 0 || k > MAX_K {
        return Err(Error::invalid("k", format!("must be in 1..={MAX_K}, got {k}")));
    }
    if dataset.is_empty() {
        return Err(Error::EmptyInput("dataset"));
    }
    for (i, sequence) in dataset.sequences.iter().enumerate() {
        if sequence.len() < k {
            return Err(Error::invalid(
                "sequences",
                format!("sequence {i} has length {} < k = {k}", sequence.len()),
            ));
        }
    }
    let rows: Vec<Vec<f64>> = dataset
        .sequences
        .par_iter()
        .map(|sequence| kmer_row(sequence, k))
        .collect();
    FeatureMatrix::from_rows(rows)
}

/// Index of a k-mer string in the lexicographic column order; used by tests
/// and diagnostics.
pub fn kmer_column(kmer: &str) -> Option<usize> {
    let mut index = 0usize;
    for &ch in kmer.as_bytes() {
        index = (index << 2) | base_index(ch)?;
    }
    Some(index)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(sequences: &[&str]) -> RawDataset {
        RawDataset {
            sequences: sequences.iter().map(|s| s.to_string()).collect(),
            labels: vec![0; sequences.len()],
            source: "test".into(),
        }
    }

    #[test]
    fn single_window_hits_one_column() {
        let x = vectorize_kmers(&dataset(&["AAA"]), 3).unwrap();
        assert_eq!(x.cols(), 64);
        assert_eq!(x.get(0, kmer_column("AAA").unwrap()), 1.0);
        assert_eq!(x.row(0).iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn overlapping_windows_counted() {
        // "ACAC" with k=2: windows AC, CA, AC.
        let x = vectorize_kmers(&dataset(&["ACAC"]), 2).unwrap();
        assert!((x.get(0, kmer_column("AC").unwrap()) - 2.0 / 3.0).abs() < 1e-15);
        assert!((x.get(0, kmer_column("CA").unwrap()) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn lexicographic_column_order() {
        assert_eq!(kmer_column("AA"), Some(0));
        assert_eq!(kmer_column("AC"), Some(1));
        assert_eq!(kmer_column("AG"), Some(2));
        assert_eq!(kmer_column("AT"), Some(3));
        assert_eq!(kmer_column("CA"), Some(4));
        assert_eq!(kmer_column("TT"), Some(15));
    }

    #[test]
    fn n_windows_reduce_row_sum() {
        // "ANGT" with k=2: windows AN, NG (skipped) and GT (counted).
        let x = vectorize_kmers(&dataset(&["ANGT"]), 2).unwrap();
        let sum: f64 = x.row(0).iter().sum();
        assert!((sum - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn row_sums_are_one_without_n() {
        let x = vectorize_kmers(&dataset(&["ACGTACGTAAGG", "TTTTCCCCGGGG"]), 3).unwrap();
        for i in 0..x.rows() {
            let sum: f64 = x.row(i).iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn short_sequence_rejected() {
        let err = vectorize_kmers(&dataset(&["AC"]), 3).unwrap_err();
        assert!(err.to_string().contains("length 2"));
    }

    #[test]
    fn k_bounds_enforced() {
        assert!(vectorize_kmers(&dataset(&["ACGT"]), 0).is_err());
        assert!(vectorize_kmers(&dataset(&["ACGTACGTA"]), 9).is_err());
    }
}
