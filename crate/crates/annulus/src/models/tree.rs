//! CART decision tree with Gini impurity and per-split random feature
//! subsets, grown best-first so `max_leaf_nodes` has its usual meaning.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        /// Bootstrap sample counts per class routed to this leaf.
        counts: [usize; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    /// Arena; index 0 is the root.
    pub nodes: Vec<TreeNode>,
}

/// Impurity decrease bookkeeping for one realized split, used for
/// feature importances.
#[derive(Debug, Clone, Copy)]
pub struct SplitRecord {
    pub feature: usize,
    /// (n_node · gini_node − n_left · gini_left − n_right · gini_right) / n_total
    pub weighted_decrease: f64,
}

struct Candidate {
    node_slot: usize,
    depth: usize,
    feature: usize,
    threshold: f64,
    /// Gini decrease weighted by node sample fraction.
    improvement: f64,
    left: (Vec<usize>, [usize; 2]),
    right: (Vec<usize>, [usize; 2]),
    order: usize,
}

fn gini(counts: &[usize; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p0 = counts[0] as f64 / n;
    let p1 = counts[1] as f64 / n;
    1.0 - p0 * p0 - p1 * p1
}

/// Best split of `samples` over a random feature subset. The subset is
/// drawn and evaluated in `canonical` order (feature indices sorted by
/// name), so results survive column permutations. Returns
/// (feature, threshold, improvement, left partition, right partition).
#[allow(clippy::type_complexity, clippy::too_many_arguments)]
fn best_split(
    x: &[Vec<f64>],
    y: &[u8],
    samples: &[usize],
    counts: &[usize; 2],
    canonical: &[usize],
    subset_size: usize,
    n_total: usize,
    rng: &mut ChaCha8Rng,
) -> Option<(usize, f64, f64, (Vec<usize>, [usize; 2]), (Vec<usize>, [usize; 2]))> {
    let mut ranks: Vec<usize> = (0..canonical.len()).collect();
    ranks.shuffle(rng);
    ranks.truncate(subset_size);
    ranks.sort_unstable(); // canonical order within the subset

    let node_n = samples.len();
    let parent_gini = gini(counts);
    let mut best: Option<(usize, f64, f64)> = None;

    for &rank in &ranks {
        let feat = canonical[rank];
        let mut vals: Vec<(f64, u8)> = samples.iter().map(|&i| (x[i][feat], y[i])).collect();
        vals.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut left = [0usize; 2];
        for w in 0..node_n - 1 {
            left[vals[w].1 as usize] += 1;
            if vals[w].0 == vals[w + 1].0 {
                continue;
            }
            let right = [counts[0] - left[0], counts[1] - left[1]];
            let nl = (w + 1) as f64;
            let nr = (node_n - w - 1) as f64;
            let decrease = parent_gini
                - (nl * gini(&left) + nr * gini(&right)) / node_n as f64;
            let threshold = vals[w].0 / 2.0 + vals[w + 1].0 / 2.0;
            let better = match best {
                None => decrease > 1e-15,
                Some((_, _, b)) => decrease > b + 1e-15,
            };
            if better {
                best = Some((feat, threshold, decrease));
            }
        }
    }

    let (feat, threshold, decrease) = best?;
    let improvement = decrease * node_n as f64 / n_total as f64;

    let mut left_samples = Vec::new();
    let mut right_samples = Vec::new();
    let mut left_counts = [0usize; 2];
    let mut right_counts = [0usize; 2];
    for &i in samples {
        if x[i][feat] <= threshold {
            left_samples.push(i);
            left_counts[y[i] as usize] += 1;
        } else {
            right_samples.push(i);
            right_counts[y[i] as usize] += 1;
        }
    }
    Some((
        feat,
        threshold,
        improvement,
        (left_samples, left_counts),
        (right_samples, right_counts),
    ))
}

impl DecisionTree {
    /// Fit on the rows of `x` indexed by `samples` (a bootstrap sample; may
    /// repeat indices). Splits draw a fresh random feature subset of
    /// `subset_size` from `rng` and are applied best-first by weighted Gini
    /// decrease, with deterministic tie-breaks by candidate creation order.
    #[allow(clippy::too_many_arguments)]
    pub fn fit(
        x: &[Vec<f64>],
        y: &[u8],
        samples: Vec<usize>,
        canonical: &[usize],
        subset_size: usize,
        max_depth: Option<usize>,
        max_leaf_nodes: Option<usize>,
        rng: &mut ChaCha8Rng,
        split_log: &mut Vec<SplitRecord>,
    ) -> DecisionTree {
        let n_total = samples.len();
        let mut counts = [0usize; 2];
        for &i in &samples {
            counts[y[i] as usize] += 1;
        }

        let mut nodes = vec![TreeNode::Leaf { counts }];
        let mut frontier: Vec<Candidate> = Vec::new();
        let mut order = 0usize;

        let try_enqueue = |frontier: &mut Vec<Candidate>,
                               rng: &mut ChaCha8Rng,
                               node_slot: usize,
                               samples: Vec<usize>,
                               counts: [usize; 2],
                               depth: usize,
                               order: &mut usize| {
            if samples.len() < 2 || counts[0] == 0 || counts[1] == 0 {
                return;
            }
            if let Some(md) = max_depth {
                if depth >= md {
                    return;
                }
            }
            if let Some((feature, threshold, improvement, left, right)) = best_split(
                x,
                y,
                &samples,
                &counts,
                canonical,
                subset_size,
                n_total,
                rng,
            ) {
                frontier.push(Candidate {
                    node_slot,
                    depth,
                    feature,
                    threshold,
                    improvement,
                    left,
                    right,
                    order: *order,
                });
                *order += 1;
            }
        };

        try_enqueue(&mut frontier, rng, 0, samples, counts, 0, &mut order);
        let mut leaves = 1usize;

        loop {
            if let Some(max_leaves) = max_leaf_nodes {
                if leaves >= max_leaves {
                    break;
                }
            }
            // best candidate: max improvement, ties to earliest creation
            let Some(pos) = frontier
                .iter()
                .enumerate()
                .max_by(|(_, a), (_, b)| {
                    a.improvement
                        .total_cmp(&b.improvement)
                        .then(b.order.cmp(&a.order))
                })
                .map(|(i, _)| i)
            else {
                break;
            };
            let cand = frontier.swap_remove(pos);

            let left_slot = nodes.len();
            nodes.push(TreeNode::Leaf {
                counts: cand.left.1,
            });
            let right_slot = nodes.len();
            nodes.push(TreeNode::Leaf {
                counts: cand.right.1,
            });
            nodes[cand.node_slot] = TreeNode::Split {
                feature: cand.feature,
                threshold: cand.threshold,
                left: left_slot,
                right: right_slot,
            };
            split_log.push(SplitRecord {
                feature: cand.feature,
                weighted_decrease: cand.improvement,
            });
            leaves += 1;

            let (ls, lc) = cand.left;
            let (rs, rc) = cand.right;
            try_enqueue(&mut frontier, rng, left_slot, ls, lc, cand.depth + 1, &mut order);
            try_enqueue(&mut frontier, rng, right_slot, rs, rc, cand.depth + 1, &mut order);
        }

        DecisionTree { nodes }
    }

    /// Class-1 probability at the leaf reached by `row`.
    pub fn predict_proba(&self, row: &[f64]) -> f64 {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    idx = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
                TreeNode::Leaf { counts } => {
                    let n = counts[0] + counts[1];
                    return if n == 0 {
                        0.5
                    } else {
                        counts[1] as f64 / n as f64
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], idx: usize) -> usize {
            match &nodes[idx] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => {
                    1 + walk(nodes, *left).max(walk(nodes, *right))
                }
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }
}
