//! Confusion-matrix metrics and rank-based ROC AUC. Positive class = MR (1).

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfusionMetrics {
    pub accuracy: f64,
    pub specificity: f64,
    pub sensitivity: f64,
    pub f1: f64,
}

/// Accuracy, specificity (TN rate), sensitivity (TP rate) and F1, with the
/// 0/0 → 0 convention.
pub fn confusion_metrics(y_true: &[u8], y_pred: &[u8]) -> Result<ConfusionMetrics> {
    if y_true.len() != y_pred.len() {
        return Err(Error::input("confusion_metrics: length mismatch"));
    }
    if y_true.is_empty() {
        return Err(Error::input("confusion_metrics: empty input"));
    }
    let (mut tp, mut tn, mut fp, mut fne) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (1, 1) => tp += 1.0,
            (0, 0) => tn += 1.0,
            (0, 1) => fp += 1.0,
            (1, 0) => fne += 1.0,
            _ => return Err(Error::input("confusion_metrics: labels must be binary")),
        }
    }
    let ratio = |num: f64, den: f64| if den == 0.0 { 0.0 } else { num / den };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fne);
    Ok(ConfusionMetrics {
        accuracy: (tp + tn) / y_true.len() as f64,
        specificity: ratio(tn, tn + fp),
        sensitivity: recall,
        f1: ratio(2.0 * precision * recall, precision + recall),
    })
}

/// Rank-based (Mann–Whitney) AUC with average ranks for tied scores;
/// equals trapezoidal ROC integration.
pub fn roc_auc(y_true: &[u8], scores: &[f64]) -> Result<f64> {
    if y_true.len() != scores.len() {
        return Err(Error::input("roc_auc: length mismatch"));
    }
    let n1 = y_true.iter().filter(|&&l| l == 1).count();
    let n0 = y_true.len() - n1;
    if n0 == 0 || n1 == 0 {
        return Err(Error::input("roc_auc: both classes must be present"));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // average ranks (1-based) over tie groups
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + j + 1) as f64 / 2.0; // mean of ranks i+1..=j
        for &idx in &order[i..j] {
            if y_true[idx] == 1 {
                rank_sum_pos += avg_rank;
            }
        }
        i = j;
    }

    let u = rank_sum_pos - (n1 * (n1 + 1)) as f64 / 2.0;
    Ok(u / (n0 as f64 * n1 as f64))
}
