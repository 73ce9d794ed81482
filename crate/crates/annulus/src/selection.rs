//! MRMR feature ranking: F-statistic relevance, mean absolute Pearson
//! correlation redundancy, combined by quotient (FCQ), greedy forward
//! selection.

use crate::{Error, Result};

/// Redundancy denominator floor, so near-orthogonal candidates do not blow
/// up the quotient.
const REDUNDANCY_FLOOR: f64 = 1e-6;

const VAR_EPS: f64 = 1e-12;

/// One selected feature with its scores.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedFeature {
    pub index: usize,
    pub name: String,
    pub relevance: f64,
    pub mrmr_score: f64,
}

/// MRMR-ranked feature subset.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub ranked: Vec<RankedFeature>,
}

impl SelectionResult {
    pub fn indices(&self) -> Vec<usize> {
        self.ranked.iter().map(|f| f.index).collect()
    }
}

/// One-way ANOVA F statistic of a feature against binary labels:
/// F = MS_between / MS_within over the two groups.
///
/// Degenerate conventions: zero within-group variance with non-zero
/// between-group spread returns +∞ (ranked above all finite values); zero
/// in both returns 0.
pub fn f_statistic(x: &[f64], y: &[u8]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::input("f_statistic: length mismatch"));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::input("f_statistic: need n >= 3"));
    }
    let (mut sum0, mut sum1, mut n0, mut n1) = (0.0, 0.0, 0usize, 0usize);
    for (&v, &l) in x.iter().zip(y) {
        if l == 0 {
            sum0 += v;
            n0 += 1;
        } else {
            sum1 += v;
            n1 += 1;
        }
    }
    if n0 == 0 || n1 == 0 {
        return Err(Error::input("f_statistic: both classes must be present"));
    }
    let mean0 = sum0 / n0 as f64;
    let mean1 = sum1 / n1 as f64;
    let grand = (sum0 + sum1) / n as f64;

    let ss_between = n0 as f64 * (mean0 - grand).powi(2) + n1 as f64 * (mean1 - grand).powi(2);
    let ss_within: f64 = x
        .iter()
        .zip(y)
        .map(|(&v, &l)| {
            let m = if l == 0 { mean0 } else { mean1 };
            (v - m).powi(2)
        })
        .sum();

    let ms_between = ss_between; // df = 1 for two groups
    let ms_within = ss_within / (n - 2) as f64;
    if ms_within < VAR_EPS {
        return Ok(if ms_between > VAR_EPS { f64::INFINITY } else { 0.0 });
    }
    Ok(ms_between / ms_within)
}

/// Pearson product-moment correlation. Returns 0 by convention when either
/// variance is zero.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::input("pearson: length mismatch"));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::input("pearson: need n >= 2"));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
        sxy += (a - mx) * (b - my);
    }
    if sxx < VAR_EPS || syy < VAR_EPS {
        return Ok(0.0);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Greedy MRMR forward selection over feature columns.
///
/// Seed = the feature with maximal F; each subsequent step scores every
/// remaining candidate as `F_i / max(mean_s |ρ(x_i, x_s)|, floor)` over the
/// already-selected set, taking the maximum. Ties break toward the earlier
/// canonical index.
pub fn mrmr_select(
    columns: &[Vec<f64>],
    names: &[String],
    labels: &[u8],
    k: usize,
) -> Result<SelectionResult> {
    let m = columns.len();
    if k > m {
        return Err(Error::input(format!(
            "mrmr_select: k = {k} exceeds feature count {m}"
        )));
    }
    if names.len() != m {
        return Err(Error::input("mrmr_select: names/columns length mismatch"));
    }

    let relevance: Vec<f64> = columns
        .iter()
        .map(|c| f_statistic(c, labels))
        .collect::<Result<_>>()?;

    let mut selected: Vec<usize> = Vec::with_capacity(k);
    let mut ranked: Vec<RankedFeature> = Vec::with_capacity(k);
    let mut remaining: Vec<bool> = vec![true; m];
    // mean |ρ| against the selected set, updated incrementally
    let mut corr_sums: Vec<f64> = vec![0.0; m];

    while selected.len() < k {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..m {
            if !remaining[i] {
                continue;
            }
            let score = if selected.is_empty() {
                relevance[i]
            } else {
                let mean_corr = corr_sums[i] / selected.len() as f64;
                relevance[i] / mean_corr.max(REDUNDANCY_FLOOR)
            };
            let better = match best {
                None => true,
                Some((_, b)) => score > b,
            };
            if better {
                best = Some((i, score));
            }
        }
        let (idx, score) = best.expect("k <= m guarantees a candidate");
        remaining[idx] = false;
        for i in 0..m {
            if remaining[i] {
                corr_sums[i] += pearson(&columns[i], &columns[idx])?.abs();
            }
        }
        selected.push(idx);
        ranked.push(RankedFeature {
            index: idx,
            name: names[idx].clone(),
            relevance: relevance[idx],
            mrmr_score: score,
        });
    }

    Ok(SelectionResult { ranked })
}

#[cfg(test)]
mod tests {
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    use super::*;

    #[test]
    fn f_statistic_hand_case() {
        // group0 = {1,2,3}, group1 = {2,3,4}: SS_between = 1.5 (df 1),
        // SS_within = 4 (df 4) → F = 1.5 / 1 = 1.5.
        let x = [1.0, 2.0, 3.0, 2.0, 3.0, 4.0];
        let y = [0, 0, 0, 1, 1, 1];
        assert_relative_eq!(f_statistic(&x, &y).unwrap(), 1.5, max_relative = 1e-12);
    }

    #[test]
    fn f_statistic_degenerate_conventions() {
        // identical distributions → 0
        let x = [1.0, 2.0, 3.0, 1.0, 2.0, 3.0];
        let y = [0, 0, 0, 1, 1, 1];
        assert_abs_diff_eq!(f_statistic(&x, &y).unwrap(), 0.0);
        // constant within groups, different means → +∞ sentinel
        let x = [1.0, 1.0, 1.0, 2.0, 2.0, 2.0];
        assert!(f_statistic(&x, &y).unwrap().is_infinite());
        // globally constant → 0
        let x = [5.0; 6];
        assert_abs_diff_eq!(f_statistic(&x, &y).unwrap(), 0.0);
    }

    #[test]
    fn f_statistic_rejects_bad_input() {
        assert!(f_statistic(&[1.0, 2.0], &[0, 1]).is_err()); // n < 3
        assert!(f_statistic(&[1.0, 2.0, 3.0], &[0, 0, 0]).is_err()); // one class
        assert!(f_statistic(&[1.0], &[0, 1]).is_err()); // length mismatch
    }

    #[test]
    fn f_statistic_null_distribution_has_mean_one() {
        // Independent Gaussian x: F ~ F(1, n−2), whose mean n−2/(n−4) ≈ 1.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let n = 200;
        let y: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
        let mean = (0..1000)
            .map(|_| {
                let x: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
                f_statistic(&x, &y).unwrap()
            })
            .sum::<f64>()
            / 1000.0;
        assert!((mean - 1.0).abs() < 0.15, "null F mean {mean}");
    }

    #[test]
    fn pearson_basic_cases() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_abs_diff_eq!(pearson(&x, &x).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pearson(&x, &neg).unwrap(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pearson(&x, &[5.0; 4]).unwrap(), 0.0);
        assert!(pearson(&x, &[1.0]).is_err());
    }

    #[test]
    fn pearson_matches_direct_formula() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [1.0, 2.0, 3.0, 5.0];
        // direct formula oracle
        let n = 4.0;
        let sx: f64 = x.iter().sum();
        let sy: f64 = y.iter().sum();
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let sxx: f64 = x.iter().map(|a| a * a).sum();
        let syy: f64 = y.iter().map(|b| b * b).sum();
        let want = (n * sxy - sx * sy)
            / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt());
        assert_abs_diff_eq!(pearson(&x, &y).unwrap(), want, epsilon = 1e-12);
    }

    /// Independent greedy re-implementation with no incremental bookkeeping.
    fn greedy_oracle(columns: &[Vec<f64>], labels: &[u8], k: usize) -> Vec<usize> {
        let f: Vec<f64> = columns.iter().map(|c| f_statistic(c, labels).unwrap()).collect();
        let mut selected: Vec<usize> = Vec::new();
        while selected.len() < k {
            let mut best: Option<(usize, f64)> = None;
            for i in 0..columns.len() {
                if selected.contains(&i) {
                    continue;
                }
                let score = if selected.is_empty() {
                    f[i]
                } else {
                    let mean: f64 = selected
                        .iter()
                        .map(|&s| pearson(&columns[i], &columns[s]).unwrap().abs())
                        .sum::<f64>()
                        / selected.len() as f64;
                    f[i] / mean.max(REDUNDANCY_FLOOR)
                };
                if best.is_none_or(|(_, b)| score > b) {
                    best = Some((i, score));
                }
            }
            selected.push(best.unwrap().0);
        }
        selected
    }

    fn random_problem(rng: &mut ChaCha8Rng, n: usize, m: usize) -> (Vec<Vec<f64>>, Vec<u8>) {
        let normal = Normal::new(0.0, 1.0).unwrap();
        let y: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
        let columns: Vec<Vec<f64>> = (0..m)
            .map(|j| {
                let signal = 0.3 * (j % 3) as f64;
                y.iter()
                    .map(|&l| normal.sample(rng) + signal * l as f64)
                    .collect()
            })
            .collect();
        (columns, y)
    }

    #[test]
    fn greedy_matches_exhaustive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..50 {
            let m = 4 + (trial % 5); // ≤ 8 features
            let (columns, y) = random_problem(&mut rng, 40, m);
            let names: Vec<String> = (0..m).map(|j| format!("f{j}")).collect();
            for k in 1..=m {
                let got = mrmr_select(&columns, &names, &y, k).unwrap();
                assert_eq!(got.indices(), greedy_oracle(&columns, &y, k), "trial {trial} k {k}");
            }
        }
    }

    #[test]
    fn duplicate_is_demoted_behind_independent_signal() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let normal = Normal::new(0.0, 1.0).unwrap();
        for trial in 0..100 {
            let n = 400; // large n: F ratios concentrate, so the score
                         // ordering is deterministic in practice
            let y: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
            // Two equal-strength signals with independent noise: the exact
            // duplicate's penalized score (F / |ρ| = F) always loses to the
            // other signal's (F / |ρ| ≈ 5·F at ρ ≈ 0.2).
            let f1: Vec<f64> = y.iter().map(|&l| l as f64 + normal.sample(&mut rng)).collect();
            let f2: Vec<f64> = f1.iter().map(|v| v + 1e-9 * normal.sample(&mut rng)).collect();
            let f3: Vec<f64> = y.iter().map(|&l| l as f64 + normal.sample(&mut rng)).collect();
            let columns = vec![f1, f2, f3];
            let names: Vec<String> = vec!["f1".into(), "f2".into(), "f3".into()];
            let got = mrmr_select(&columns, &names, &y, 3).unwrap();
            let order = got.indices();
            // The near-duplicate pair (f1, f2) must never fill both top
            // ranks: the independent signal f3 outranks the duplicate.
            assert!(
                order[0] == 2 || order[1] == 2,
                "trial {trial}: duplicate displaced the independent signal: {order:?}"
            );
        }
    }

    #[test]
    fn k1_is_the_max_f_feature() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (columns, y) = random_problem(&mut rng, 50, 6);
        let names: Vec<String> = (0..6).map(|j| format!("f{j}")).collect();
        let got = mrmr_select(&columns, &names, &y, 1).unwrap();
        let f: Vec<f64> = columns.iter().map(|c| f_statistic(c, &y).unwrap()).collect();
        let argmax = (0..6).max_by(|&a, &b| f[a].total_cmp(&f[b])).unwrap();
        assert_eq!(got.indices(), vec![argmax]);
        assert_relative_eq!(got.ranked[0].relevance, f[argmax]);
    }

    #[test]
    fn selection_is_scale_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let (columns, y) = random_problem(&mut rng, 50, 7);
        let names: Vec<String> = (0..7).map(|j| format!("f{j}")).collect();
        let base = mrmr_select(&columns, &names, &y, 5).unwrap();
        let scaled: Vec<Vec<f64>> = columns
            .iter()
            .enumerate()
            .map(|(j, c)| c.iter().map(|v| v * (1.0 + j as f64) * 100.0).collect())
            .collect();
        let got = mrmr_select(&scaled, &names, &y, 5).unwrap();
        assert_eq!(base.indices(), got.indices());
    }

    #[test]
    fn selection_is_row_permutation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let (columns, y) = random_problem(&mut rng, 50, 6);
        let names: Vec<String> = (0..6).map(|j| format!("f{j}")).collect();
        let base = mrmr_select(&columns, &names, &y, 4).unwrap();

        let mut perm: Vec<usize> = (0..50).collect();
        use rand::seq::SliceRandom;
        perm.shuffle(&mut rng);
        let p_cols: Vec<Vec<f64>> = columns
            .iter()
            .map(|c| perm.iter().map(|&i| c[i]).collect())
            .collect();
        let p_y: Vec<u8> = perm.iter().map(|&i| y[i]).collect();
        let got = mrmr_select(&p_cols, &names, &p_y, 4).unwrap();
        assert_eq!(base.indices(), got.indices());
    }

    #[test]
    fn k_exceeding_features_is_rejected() {
        let columns = vec![vec![1.0, 2.0, 3.0, 4.0]];
        let names = vec!["f0".to_string()];
        assert!(mrmr_select(&columns, &names, &[0, 1, 0, 1], 2).is_err());
    }
}
