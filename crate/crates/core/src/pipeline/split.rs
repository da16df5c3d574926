//! Seeded stratified splitting and subsampling.
//!
//! Both operations return sorted index vectors into the original row order,
//! deterministic for a fixed seed, with class proportions preserved within
//! one sample.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Indices of each class in ascending label order, erroring when a class is
/// missing or too small to split.
fn class_indices(labels: &[u8]) -> Result<Vec<Vec<usize>>> {
    if labels.is_empty() {
        return Err(Error::EmptyInput("labels"));
    }
    let mut classes: Vec<u8> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::SingleClass);
    }
    let groups: Vec<Vec<usize>> = classes
        .iter()
        .map(|&c| {
            labels
                .iter()
                .enumerate()
                .filter(|(_, &l)| l == c)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    for group in &groups {
        if group.len() < 2 {
            return Err(Error::invalid(
                "labels",
                format!("a class has only {} sample(s); need at least 2", group.len()),
            ));
        }
    }
    Ok(groups)
}

/// Splits row indices into (train, test) with per-class shuffling.
///
/// Each class contributes round(count · test_fraction) test samples,
/// clamped so both sides keep at least one sample of every class.
pub fn stratified_split(
    labels: &[u8],
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::invalid(
            "test_fraction",
            format!("must lie in (0, 1), got {test_fraction}"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for mut group in class_indices(labels)? {
        group.shuffle(&mut rng);
        let count = group.len();
        let n_test = (((count as f64) * test_fraction).round() as usize).clamp(1, count - 1);
        test.extend_from_slice(&group[..n_test]);
        train.extend_from_slice(&group[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Picks a class-balanced subsample of `size` indices (proportions
/// preserved within one sample). Returns everything when `size` covers the
/// whole dataset.
pub fn stratified_subset(labels: &[u8], size: usize, seed: u64) -> Result<Vec<usize>> {
    let total = labels.len();
    if size >= total {
        return Ok((0..total).collect());
    }
    if size < 4 {
        return Err(Error::invalid("subset_size", format!("need at least 4, got {size}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups = class_indices(labels)?;
    let mut picked = Vec::with_capacity(size);
    let mut budget = size;
    for (gi, mut group) in groups.clone().into_iter().enumerate() {
        group.shuffle(&mut rng);
        let remaining_groups = groups.len() - gi - 1;
        let share = if remaining_groups == 0 {
            budget
        } else {
            // Proportional share, leaving at least 2 per remaining class.
            let proportional =
                ((group.len() as f64 / total as f64) * size as f64).round() as usize;
            proportional.clamp(2, budget.saturating_sub(2 * remaining_groups))
        };
        let take = share.min(group.len());
        picked.extend_from_slice(&group[..take]);
        budget -= take;
    }
    picked.sort_unstable();
    Ok(picked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_samples_quarter_fraction() {
        let labels = [0, 0, 0, 0, 1, 1, 1, 1];
        let (train, test) = stratified_split(&labels, 0.25, 7).unwrap();
        assert_eq!(train.len(), 6);
        assert_eq!(test.len(), 2);
        let test_classes: Vec<u8> = test.iter().map(|&i| labels[i]).collect();
        assert!(test_classes.contains(&0));
        assert!(test_classes.contains(&1));
    }

    #[test]
    fn half_fraction_on_four() {
        let labels = [0, 1, 0, 1];
        let (train, test) = stratified_split(&labels, 0.5, 0).unwrap();
        assert_eq!(train.len(), 2);
        assert_eq!(test.len(), 2);
        for side in [&train, &test] {
            let classes: Vec<u8> = side.iter().map(|&i| labels[i]).collect();
            assert!(classes.contains(&0) && classes.contains(&1));
        }
    }

    #[test]
    fn same_seed_same_partition() {
        let labels: Vec<u8> = (0..40).map(|i| (i % 2) as u8).collect();
        let a = stratified_split(&labels, 0.25, 99).unwrap();
        let b = stratified_split(&labels, 0.25, 99).unwrap();
        assert_eq!(a, b);
        let c = stratified_split(&labels, 0.25, 100).unwrap();
        assert_ne!(a, c, "different seeds should shuffle differently");
    }

    #[test]
    fn partition_covers_everything_once() {
        let labels: Vec<u8> = (0..31).map(|i| u8::from(i % 3 == 0)).collect();
        let (train, test) = stratified_split(&labels, 0.3, 5).unwrap();
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..31).collect::<Vec<_>>());
    }

    #[test]
    fn single_class_rejected() {
        assert!(matches!(stratified_split(&[1, 1, 1], 0.5, 0), Err(Error::SingleClass)));
    }

    #[test]
    fn tiny_class_rejected() {
        let err = stratified_split(&[0, 0, 0, 1], 0.5, 0).unwrap_err();
        assert!(err.to_string().contains("at least 2"));
    }

    #[test]
    fn bad_fraction_rejected() {
        assert!(stratified_split(&[0, 1, 0, 1], 0.0, 0).is_err());
        assert!(stratified_split(&[0, 1, 0, 1], 1.0, 0).is_err());
    }

    #[test]
    fn subset_is_balanced_and_deterministic() {
        let labels: Vec<u8> = (0..100).map(|i| (i % 2) as u8).collect();
        let a = stratified_subset(&labels, 20, 3).unwrap();
        let b = stratified_subset(&labels, 20, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        let ones = a.iter().filter(|&&i| labels[i] == 1).count();
        assert_eq!(ones, 10);
    }

    #[test]
    fn subset_of_everything_is_identity() {
        let labels = [0u8, 1, 0, 1];
        assert_eq!(stratified_subset(&labels, 10, 0).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn unbalanced_subset_keeps_proportions_roughly() {
        // 75/25 split of 80 samples; a 40-sample subset should hold 30/10.
        let labels: Vec<u8> = (0..80).map(|i| u8::from(i % 4 == 0)).collect();
        let subset = stratified_subset(&labels, 40, 11).unwrap();
        assert_eq!(subset.len(), 40);
        let ones = subset.iter().filter(|&&i| labels[i] == 1).count();
        assert_eq!(ones, 10);
    }
}
