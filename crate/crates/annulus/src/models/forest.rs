//! Random forest: bootstrap-trained CART trees with per-split random
//! feature subsets, soft-vote aggregation, and Gini feature importances.
//!
//! All randomness derives from a single root seed via one counter-based
//! ChaCha stream per tree, so results are independent of fitting order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use super::tree::{DecisionTree, SplitRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeatures {
    Sqrt,
    Log2,
    All,
}

impl MaxFeatures {
    pub fn subset_size(&self, n_features: usize) -> usize {
        let s = match self {
            MaxFeatures::Sqrt => (n_features as f64).sqrt().floor() as usize,
            MaxFeatures::Log2 => (n_features as f64).log2().floor() as usize,
            MaxFeatures::All => n_features,
        };
        s.clamp(1, n_features)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfHyperparams {
    pub n_estimators: usize,
    pub max_features: MaxFeatures,
    pub max_depth: Option<usize>,
    pub max_leaf_nodes: Option<usize>,
}

impl Default for RfHyperparams {
    fn default() -> Self {
        RfHyperparams {
            n_estimators: 100,
            max_features: MaxFeatures::Sqrt,
            max_depth: None,
            max_leaf_nodes: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<DecisionTree>,
    pub hyperparams: RfHyperparams,
    pub seed: u64,
    pub n_features: usize,
    /// Per-tree split bookkeeping for feature importances.
    pub split_log: Vec<Vec<SplitLogEntry>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitLogEntry {
    pub feature: usize,
    pub weighted_decrease: f64,
}

/// Fit a random forest. Fully deterministic given `seed`: tree `t` draws
/// its bootstrap sample and split subsets from ChaCha stream `t`.
///
/// `names` are the column names; per-split feature subsampling is keyed to
/// their sort order, so refitting after permuting columns and names
/// together yields identical predictions.
pub fn rf_fit(
    x: &[Vec<f64>],
    y: &[u8],
    names: &[String],
    params: &RfHyperparams,
    seed: u64,
) -> Result<ForestModel> {
    if x.len() != y.len() {
        return Err(Error::input("rf_fit: length mismatch"));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::input("rf_fit: need >= 2 samples"));
    }
    let n1 = y.iter().filter(|&&l| l == 1).count();
    if n1 == 0 || n1 == n {
        return Err(Error::input("rf_fit: both classes must be present"));
    }
    if params.n_estimators == 0 {
        return Err(Error::input("rf_fit: n_estimators must be > 0"));
    }
    let n_features = x[0].len();
    if names.len() != n_features {
        return Err(Error::input("rf_fit: names/columns length mismatch"));
    }
    let mut canonical: Vec<usize> = (0..n_features).collect();
    canonical.sort_by(|&a, &b| names[a].cmp(&names[b]));
    let subset_size = params.max_features.subset_size(n_features);

    let mut trees = Vec::with_capacity(params.n_estimators);
    let mut split_log = Vec::with_capacity(params.n_estimators);
    for t in 0..params.n_estimators {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let bootstrap: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let mut log = Vec::new();
        let tree = DecisionTree::fit(
            x,
            y,
            bootstrap,
            &canonical,
            subset_size,
            params.max_depth,
            params.max_leaf_nodes,
            &mut rng,
            &mut log,
        );
        trees.push(tree);
        split_log.push(
            log.iter()
                .map(|r: &SplitRecord| SplitLogEntry {
                    feature: r.feature,
                    weighted_decrease: r.weighted_decrease,
                })
                .collect(),
        );
    }

    Ok(ForestModel {
        trees,
        hyperparams: *params,
        seed,
        n_features,
        split_log,
    })
}

/// Predicted labels and mean class-1 leaf-probability scores.
pub fn rf_predict(model: &ForestModel, x: &[Vec<f64>]) -> Result<(Vec<u8>, Vec<f64>)> {
    let mut labels = Vec::with_capacity(x.len());
    let mut scores = Vec::with_capacity(x.len());
    for row in x {
        if row.len() != model.n_features {
            return Err(Error::input(format!(
                "rf_predict: expected {} features, got {}",
                model.n_features,
                row.len()
            )));
        }
        let score = model
            .trees
            .iter()
            .map(|t| t.predict_proba(row))
            .sum::<f64>()
            / model.trees.len() as f64;
        labels.push(u8::from(score > 0.5));
        scores.push(score);
    }
    Ok((labels, scores))
}

/// Mean decrease in Gini impurity, weighted by node sample fraction,
/// normalized to sum to 1.
pub fn rf_feature_importance(model: &ForestModel) -> Vec<f64> {
    let mut acc = vec![0.0; model.n_features];
    for log in &model.split_log {
        for entry in log {
            acc[entry.feature] += entry.weighted_decrease;
        }
    }
    let total: f64 = acc.iter().sum();
    if total <= 0.0 {
        // no splits anywhere: flat importances
        return vec![1.0 / model.n_features as f64; model.n_features];
    }
    acc.iter().map(|v| v / total).collect()
}
