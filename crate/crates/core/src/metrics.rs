//! Binary classification metrics: confusion counts, the derived ratio
//! metrics, and AUROC.
//!
//! The positive class is +1 throughout. Zero-denominator cases (no
//! predicted positives, no actual positives) define the affected metric as
//! 0 rather than NaN. AUROC uses the rank (Mann–Whitney) formulation with
//! ties counted ½, which is exact and equals trapezoidal integration of the
//! empirical ROC curve.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auroc: Option<f64>,
}

pub fn confusion(predictions: &[i8], labels: &[i8]) -> Result<ConfusionCounts> {
    if predictions.is_empty() {
        return Err(Error::EmptyInput("predictions"));
    }
    if predictions.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            got: predictions.len(),
        });
    }
    let mut counts = ConfusionCounts { tp: 0, fp: 0, tn: 0, fn_: 0 };
    for (&p, &y) in predictions.iter().zip(labels) {
        for (name, v) in [("predictions", p), ("labels", y)] {
            if v != 1 && v != -1 {
                return Err(Error::invalid(name, format!("expected ±1, got {v}")));
            }
        }
        match (p, y) {
            (1, 1) => counts.tp += 1,
            (1, -1) => counts.fp += 1,
            (-1, -1) => counts.tn += 1,
            _ => counts.fn_ += 1,
        }
    }
    Ok(counts)
}

/// Probability that a random positive's score exceeds a random negative's,
/// ties counted ½. Computed from rank sums so equal scores are handled
/// exactly; the numerator is an integer count of half-wins, making results
/// bit-identical to an explicit pairwise tally.
pub fn auroc(scores: &[f64], labels: &[i8]) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("scores"));
    }
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch { expected: labels.len(), got: scores.len() });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::invalid("scores", "non-finite score"));
    }
    let positives = labels.iter().filter(|&&y| y == 1).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClass);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));

    // 2·(rank sum of positives), accumulated per tie run so the doubled
    // average rank (start + end + 2 in 1-based terms) stays an integer.
    let mut doubled_rank_sum: i64 = 0;
    let mut start = 0usize;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len() && scores[order[end + 1]] == scores[order[start]] {
            end += 1;
        }
        let doubled_rank = (start + end + 2) as i64;
        let pos_in_run =
            order[start..=end].iter().filter(|&&i| labels[i] == 1).count() as i64;
        doubled_rank_sum += pos_in_run * doubled_rank;
        start = end + 1;
    }

    let p = positives as i64;
    let n = negatives as i64;
    let numerator = doubled_rank_sum - p * (p + 1);
    Ok(numerator as f64 / (2 * p * n) as f64)
}

/// Derives the ratio metrics from counts, attaching AUROC when decision
/// scores are supplied.
pub fn metrics(
    counts: &ConfusionCounts,
    scores_and_labels: Option<(&[f64], &[i8])>,
) -> Result<MetricsReport> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::EmptyInput("confusion counts"));
    }
    let ratio = |num: usize, denom: usize| {
        if denom == 0 {
            0.0
        } else {
            num as f64 / denom as f64
        }
    };
    let accuracy = (counts.tp + counts.tn) as f64 / total as f64;
    let precision = ratio(counts.tp, counts.tp + counts.fp);
    let recall = ratio(counts.tp, counts.tp + counts.fn_);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    let auroc_value = match scores_and_labels {
        Some((scores, labels)) => Some(auroc(scores, labels)?),
        None => None,
    };
    Ok(MetricsReport { accuracy, precision, recall, f1, auroc: auroc_value })
}
