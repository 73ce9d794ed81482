//! Exhaustive hyperparameter grid search over explicit validation folds.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use super::forest::{rf_fit, rf_predict, MaxFeatures, RfHyperparams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub params: RfHyperparams,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
}

/// The default search grid: estimators × feature rule × depth × leaf cap.
pub fn default_grid() -> Vec<RfHyperparams> {
    let mut grid = Vec::new();
    for &n_estimators in &[100, 200, 500] {
        for &max_features in &[MaxFeatures::Sqrt, MaxFeatures::Log2] {
            for &max_depth in &[Some(3), Some(5), Some(10), None] {
                for &max_leaf_nodes in &[Some(10), Some(50), None] {
                    grid.push(RfHyperparams {
                        n_estimators,
                        max_features,
                        max_depth,
                        max_leaf_nodes,
                    });
                }
            }
        }
    }
    grid
}

/// Evaluate every grid cell by mean validation accuracy over the provided
/// (train, validation) index folds. Ties break toward the smaller model:
/// fewer estimators, then shallower trees.
pub fn grid_search(
    x: &[Vec<f64>],
    y: &[u8],
    names: &[String],
    grid: &[RfHyperparams],
    folds: &[(Vec<usize>, Vec<usize>)],
    seed: u64,
) -> Result<(RfHyperparams, Vec<GridCell>)> {
    if grid.is_empty() {
        return Err(Error::input("grid_search: empty grid"));
    }
    if folds.is_empty() {
        return Err(Error::input("grid_search: no folds"));
    }

    let mut cells = Vec::with_capacity(grid.len());
    for params in grid {
        let mut scores = Vec::with_capacity(folds.len());
        for (train, val) in folds {
            let xt: Vec<Vec<f64>> = train.iter().map(|&i| x[i].clone()).collect();
            let yt: Vec<u8> = train.iter().map(|&i| y[i]).collect();
            let xv: Vec<Vec<f64>> = val.iter().map(|&i| x[i].clone()).collect();
            let yv: Vec<u8> = val.iter().map(|&i| y[i]).collect();
            let model = rf_fit(&xt, &yt, names, params, seed)?;
            let (pred, _) = rf_predict(&model, &xv)?;
            let correct = pred.iter().zip(&yv).filter(|(p, t)| p == t).count();
            scores.push(correct as f64 / yv.len() as f64);
        }
        let mean = scores.iter().sum::<f64>() / scores.len() as f64;
        let var = scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / scores.len() as f64;
        cells.push(GridCell {
            params: *params,
            mean_accuracy: mean,
            std_accuracy: var.sqrt(),
        });
    }

    let best = cells
        .iter()
        .min_by(|a, b| {
            b.mean_accuracy
                .total_cmp(&a.mean_accuracy)
                .then(a.params.n_estimators.cmp(&b.params.n_estimators))
                .then(depth_rank(a.params.max_depth).cmp(&depth_rank(b.params.max_depth)))
        })
        .expect("grid is non-empty")
        .params;

    Ok((best, cells))
}

fn depth_rank(depth: Option<usize>) -> usize {
    depth.unwrap_or(usize::MAX)
}

#[cfg(test)]
mod tests {
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    use super::*;

    fn threshold_problem(rng: &mut ChaCha8Rng) -> (Vec<Vec<f64>>, Vec<u8>) {
        // One clean threshold plus noise dimensions deeper trees overfit.
        let normal = Normal::new(0.0, 1.0).unwrap();
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..120 {
            let l = (i % 2) as u8;
            x.push(vec![
                l as f64 * 2.0 + rng.gen_range(-0.9..0.9),
                normal.sample(rng),
                normal.sample(rng),
            ]);
            y.push(l);
        }
        (x, y)
    }

    fn two_folds(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        let first: Vec<usize> = (0..n / 2).collect();
        let second: Vec<usize> = (n / 2..n).collect();
        vec![(first.clone(), second.clone()), (second, first)]
    }

    #[test]
    fn single_cell_grid_returns_that_cell() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (x, y) = threshold_problem(&mut rng);
        let names: Vec<String> = (0..3).map(|j| format!("f{j}")).collect();
        let cell = RfHyperparams {
            n_estimators: 10,
            max_features: MaxFeatures::All,
            max_depth: Some(2),
            max_leaf_nodes: None,
        };
        let (best, cells) = grid_search(&x, &y, &names, &[cell], &two_folds(120), 5).unwrap();
        assert_eq!(best, cell);
        assert_eq!(cells.len(), 1);
        assert!(cells[0].mean_accuracy > 0.8);
    }

    #[test]
    fn tie_break_prefers_the_smaller_model() {
        // Perfectly separable data: every cell scores 1.0, so the smallest
        // model must win (fewest estimators, then shallowest).
        // Interleave labels so every fold of two_folds(40) sees both classes.
        let y: Vec<u8> = (0..40).map(|i| (i % 2) as u8).collect();
        let x: Vec<Vec<f64>> = (0..40).map(|i| vec![(i % 2) as f64 * 100.0 + i as f64]).collect();
        let names = vec!["f0".to_string()];
        let grid = [
            RfHyperparams {
                n_estimators: 50,
                max_features: MaxFeatures::All,
                max_depth: None,
                max_leaf_nodes: None,
            },
            RfHyperparams {
                n_estimators: 10,
                max_features: MaxFeatures::All,
                max_depth: Some(3),
                max_leaf_nodes: None,
            },
            RfHyperparams {
                n_estimators: 10,
                max_features: MaxFeatures::All,
                max_depth: Some(1),
                max_leaf_nodes: None,
            },
        ];
        let (best, cells) = grid_search(&x, &y, &names, &grid, &two_folds(40), 2).unwrap();
        assert!(cells.iter().all(|c| c.mean_accuracy == 1.0));
        assert_eq!(best.n_estimators, 10);
        assert_eq!(best.max_depth, Some(1));
    }

    #[test]
    fn reports_every_cell() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (x, y) = threshold_problem(&mut rng);
        let names: Vec<String> = (0..3).map(|j| format!("f{j}")).collect();
        let grid: Vec<RfHyperparams> = default_grid().into_iter().take(6).collect();
        let (_, cells) = grid_search(&x, &y, &names, &grid, &two_folds(120), 3).unwrap();
        assert_eq!(cells.len(), 6);
        for c in &cells {
            assert!((0.0..=1.0).contains(&c.mean_accuracy));
            assert!(c.std_accuracy >= 0.0);
        }
    }

    #[test]
    fn default_grid_shape() {
        // 3 estimator counts × 2 feature rules × 4 depths × 3 leaf caps
        assert_eq!(default_grid().len(), 72);
    }

    #[test]
    fn empty_inputs_are_rejected() {
        let x = vec![vec![1.0]];
        let names = vec!["f0".to_string()];
        assert!(grid_search(&x, &[0], &names, &[], &two_folds(1), 1).is_err());
        assert!(grid_search(&x, &[0], &names, &default_grid(), &[], 1).is_err());
    }
}
