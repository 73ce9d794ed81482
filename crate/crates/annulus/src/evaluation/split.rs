//! Stratified holdout + k-fold splitting, reproducible from a seed.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// A reproducible split plan: a fixed per-class holdout plus k
/// (train, validation) folds partitioning the remainder.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPlan {
    pub holdout: Vec<usize>,
    /// Per fold: (train indices, validation indices) over the non-holdout set.
    pub folds: Vec<(Vec<usize>, Vec<usize>)>,
    pub seed: u64,
}

/// Build the plan: per class, seeded shuffle, remove the holdout, then
/// round-robin assignment to folds. Class `c` starts its round-robin at
/// fold `c mod folds`, which keeps per-fold class proportions within one
/// sample of global.
pub fn stratified_split(
    labels: &[u8],
    holdout_per_class: usize,
    folds: usize,
    seed: u64,
) -> Result<SplitPlan> {
    if folds < 2 {
        return Err(Error::input("stratified_split: need >= 2 folds"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut holdout = Vec::new();
    let mut fold_members: Vec<Vec<usize>> = vec![Vec::new(); folds];

    for class in 0..=1u8 {
        let mut members: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == class)
            .map(|(i, _)| i)
            .collect();
        if members.len() < holdout_per_class + folds {
            return Err(Error::input(format!(
                "stratified_split: class {class} has {} samples, needs >= {}",
                members.len(),
                holdout_per_class + folds
            )));
        }
        members.shuffle(&mut rng);
        holdout.extend(members.drain(..holdout_per_class));
        for (i, idx) in members.into_iter().enumerate() {
            fold_members[(i + class as usize) % folds].push(idx);
        }
    }

    holdout.sort_unstable();
    for members in &mut fold_members {
        members.sort_unstable();
    }

    let fold_plan = (0..folds)
        .map(|f| {
            let val = fold_members[f].clone();
            let mut train: Vec<usize> = fold_members
                .iter()
                .enumerate()
                .filter(|(g, _)| *g != f)
                .flat_map(|(_, m)| m.iter().copied())
                .collect();
            train.sort_unstable();
            (train, val)
        })
        .collect();

    Ok(SplitPlan {
        holdout,
        folds: fold_plan,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    fn labels(n0: usize, n1: usize) -> Vec<u8> {
        // interleave so index order carries no class information
        (0..n0 + n1).map(|i| (i % 2 == 1 && i / 2 < n1) as u8).collect()
    }

    fn class_count(labels: &[u8], idx: &[usize], class: u8) -> usize {
        idx.iter().filter(|&&i| labels[i] == class).count()
    }

    #[test]
    fn small_balanced_split_partitions_cleanly() {
        let y = labels(5, 5);
        let plan = stratified_split(&y, 1, 2, 0).unwrap();
        assert_eq!(plan.holdout.len(), 2);
        assert_eq!(class_count(&y, &plan.holdout, 0), 1);
        assert_eq!(class_count(&y, &plan.holdout, 1), 1);

        let holdout: BTreeSet<usize> = plan.holdout.iter().copied().collect();
        let mut seen = BTreeSet::new();
        for (train, val) in &plan.folds {
            assert!(train.iter().all(|i| !holdout.contains(i)));
            assert!(val.iter().all(|i| !holdout.contains(i)));
            assert!(train.iter().all(|i| !val.contains(i)));
            assert_eq!(train.len() + val.len(), 8);
            seen.extend(val.iter().copied());
        }
        // validation folds partition the non-holdout set
        assert_eq!(seen.len(), 8);
        assert!(seen.iter().all(|i| !holdout.contains(i)));
    }

    /// The cohort sizes of interest: 98 + 89 patients, 10 per class held
    /// out, 5 folds. One fold must train on 134 and validate on 33.
    #[test]
    fn cohort_sized_split_has_the_expected_fold_sizes() {
        let y = labels(98, 89);
        let plan = stratified_split(&y, 10, 5, 42).unwrap();
        assert_eq!(plan.holdout.len(), 20);
        assert_eq!(class_count(&y, &plan.holdout, 0), 10);
        assert_eq!(class_count(&y, &plan.holdout, 1), 10);

        let mut val_sizes: Vec<usize> = plan.folds.iter().map(|(_, v)| v.len()).collect();
        for (train, val) in &plan.folds {
            assert_eq!(train.len() + val.len(), 167);
            // per-fold class balance within one sample of proportional
            let c0 = class_count(&y, val, 0) as f64;
            let c1 = class_count(&y, val, 1) as f64;
            assert!((c0 - 88.0 / 5.0).abs() <= 1.0);
            assert!((c1 - 79.0 / 5.0).abs() <= 1.0);
        }
        assert!(plan
            .folds
            .iter()
            .any(|(t, v)| t.len() == 134 && v.len() == 33));
        val_sizes.sort_unstable();
        assert_eq!(val_sizes, vec![33, 33, 33, 34, 34]);
    }

    #[test]
    fn same_seed_reproduces_the_plan() {
        let y = labels(40, 30);
        let a = stratified_split(&y, 3, 4, 7).unwrap();
        let b = stratified_split(&y, 3, 4, 7).unwrap();
        assert_eq!(a, b);
        let c = stratified_split(&y, 3, 4, 8).unwrap();
        assert_ne!(a.holdout, c.holdout);
    }

    #[test]
    fn insufficient_samples_are_rejected() {
        // class 1 has 6 samples but needs holdout 2 + folds 5 = 7
        let y = labels(20, 6);
        assert!(stratified_split(&y, 2, 5, 0).is_err());
        // fewer than two folds is meaningless
        assert!(stratified_split(&labels(10, 10), 1, 1, 0).is_err());
    }
}
