//! Cross-validation driver: per-fold standardization + MRMR + model fit,
//! validation metrics aggregated mean ± std, and a final holdout row from a
//! refit on all non-holdout data.

use crate::features::FeatureMatrix;
use crate::models::{
    lda_fit, lda_predict, rf_fit, rf_predict, LdaModel, ForestModel, RfHyperparams, Standardizer,
};
use crate::selection::{mrmr_select, SelectionResult};
use crate::{Error, Result};

use super::metrics::{confusion_metrics, roc_auc};
use super::split::{stratified_split, SplitPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Lda,
    Rf,
    Both,
}

impl ModelKind {
    fn wants_lda(&self) -> bool {
        matches!(self, ModelKind::Lda | ModelKind::Both)
    }
    fn wants_rf(&self) -> bool {
        matches!(self, ModelKind::Rf | ModelKind::Both)
    }
}

/// Whether MRMR runs inside each fold (leakage-free, default) or once
/// globally on the non-holdout data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionMode {
    PerFold,
    Global,
}

#[derive(Debug, Clone)]
pub struct CvConfig {
    pub k: usize,
    pub folds: usize,
    pub holdout_per_class: usize,
    pub seed: u64,
    pub selection: SelectionMode,
    pub models: ModelKind,
    pub rf_params: RfHyperparams,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            k: 25,
            folds: 5,
            holdout_per_class: 10,
            seed: 42,
            selection: SelectionMode::PerFold,
            models: ModelKind::Both,
            rf_params: RfHyperparams::default(),
        }
    }
}

/// The five metrics of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSet {
    pub accuracy: f64,
    pub specificity: f64,
    pub sensitivity: f64,
    pub f1: f64,
    pub auc: f64,
}

impl MetricSet {
    pub fn values(&self) -> [f64; 5] {
        [
            self.accuracy,
            self.specificity,
            self.sensitivity,
            self.f1,
            self.auc,
        ]
    }
}

/// One row of the final report; `std` is present for validation rows
/// (population std over folds) and absent for test rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub label: String,
    pub mean: MetricSet,
    pub std: Option<MetricSet>,
}

#[derive(Debug, Clone)]
pub struct EvalReport {
    pub rows: Vec<ReportRow>,
    /// Per-fold validation metrics keyed by model name.
    pub fold_metrics: Vec<(String, Vec<MetricSet>)>,
    /// MRMR ranking of the final refit on all non-holdout data.
    pub selection: SelectionResult,
    pub plan: SplitPlan,
}

/// Everything fitted from one training split. Fitting reads only the rows
/// listed in `train_idx`.
#[derive(Debug, Clone)]
pub struct FittedPipeline {
    pub selection: SelectionResult,
    pub standardizer: Standardizer,
    pub lda: Option<LdaModel>,
    pub rf: Option<ForestModel>,
}

/// Fit standardizer + MRMR + model(s) on the training rows of `matrix`.
/// `preselected` overrides MRMR (global-selection mode).
pub fn fit_pipeline(
    matrix: &FeatureMatrix,
    train_idx: &[usize],
    cfg: &CvConfig,
    preselected: Option<&SelectionResult>,
) -> Result<FittedPipeline> {
    let train_labels: Vec<u8> = train_idx.iter().map(|&i| matrix.labels[i]).collect();

    let selection = match preselected {
        Some(s) => s.clone(),
        None => {
            let columns: Vec<Vec<f64>> = (0..matrix.n_features())
                .map(|j| train_idx.iter().map(|&i| matrix.rows[i][j]).collect())
                .collect();
            mrmr_select(&columns, &matrix.names, &train_labels, cfg.k)?
        }
    };
    let selected = selection.indices();

    let train_rows: Vec<Vec<f64>> = train_idx
        .iter()
        .map(|&i| selected.iter().map(|&j| matrix.rows[i][j]).collect())
        .collect();
    let standardizer = Standardizer::fit(&train_rows)?;

    let lda = if cfg.models.wants_lda() {
        Some(lda_fit(&standardizer.transform(&train_rows), &train_labels)?)
    } else {
        None
    };
    let rf = if cfg.models.wants_rf() {
        let selected_names: Vec<String> =
            selection.ranked.iter().map(|r| r.name.clone()).collect();
        Some(rf_fit(
            &train_rows,
            &train_labels,
            &selected_names,
            &cfg.rf_params,
            cfg.seed,
        )?)
    } else {
        None
    };

    Ok(FittedPipeline {
        selection,
        standardizer,
        lda,
        rf,
    })
}

impl FittedPipeline {
    fn select_rows(&self, matrix: &FeatureMatrix, idx: &[usize]) -> Vec<Vec<f64>> {
        let selected = self.selection.indices();
        idx.iter()
            .map(|&i| selected.iter().map(|&j| matrix.rows[i][j]).collect())
            .collect()
    }

    /// Metrics of one model on the given rows.
    fn evaluate_model(
        &self,
        name: &str,
        matrix: &FeatureMatrix,
        idx: &[usize],
    ) -> Result<MetricSet> {
        let rows = self.select_rows(matrix, idx);
        let truth: Vec<u8> = idx.iter().map(|&i| matrix.labels[i]).collect();
        let (labels, scores) = match name {
            "LDA" => {
                let lda = self.lda.as_ref().ok_or_else(|| Error::input("LDA not fitted"))?;
                lda_predict(lda, &self.standardizer.transform(&rows))?
            }
            "RF" => {
                let rf = self.rf.as_ref().ok_or_else(|| Error::input("RF not fitted"))?;
                rf_predict(rf, &rows)?
            }
            other => return Err(Error::input(format!("unknown model {other}"))),
        };
        let cm = confusion_metrics(&truth, &labels)?;
        Ok(MetricSet {
            accuracy: cm.accuracy,
            specificity: cm.specificity,
            sensitivity: cm.sensitivity,
            f1: cm.f1,
            auc: roc_auc(&truth, &scores)?,
        })
    }
}

fn aggregate(fold_scores: &[MetricSet]) -> (MetricSet, MetricSet) {
    let n = fold_scores.len() as f64;
    let mut mean = [0.0; 5];
    for m in fold_scores {
        for (acc, v) in mean.iter_mut().zip(m.values()) {
            *acc += v / n;
        }
    }
    let mut var = [0.0; 5];
    for m in fold_scores {
        for ((acc, v), mu) in var.iter_mut().zip(m.values()).zip(mean) {
            *acc += (v - mu).powi(2) / n;
        }
    }
    let to_set = |v: [f64; 5]| MetricSet {
        accuracy: v[0],
        specificity: v[1],
        sensitivity: v[2],
        f1: v[3],
        auc: v[4],
    };
    (to_set(mean), to_set(var.map(f64::sqrt)))
}

/// Run the full protocol: stratified holdout + k-fold CV, per-fold fitting,
/// then a final refit on all non-holdout data evaluated on the holdout.
pub fn run_cv(matrix: &FeatureMatrix, cfg: &CvConfig) -> Result<EvalReport> {
    let plan = stratified_split(&matrix.labels, cfg.holdout_per_class, cfg.folds, cfg.seed)?;

    let non_holdout: Vec<usize> = (0..matrix.n_samples())
        .filter(|i| !plan.holdout.contains(i))
        .collect();

    let global_selection = match cfg.selection {
        SelectionMode::Global => {
            let labels: Vec<u8> = non_holdout.iter().map(|&i| matrix.labels[i]).collect();
            let columns: Vec<Vec<f64>> = (0..matrix.n_features())
                .map(|j| non_holdout.iter().map(|&i| matrix.rows[i][j]).collect())
                .collect();
            Some(mrmr_select(&columns, &matrix.names, &labels, cfg.k)?)
        }
        SelectionMode::PerFold => None,
    };

    let model_names: Vec<&str> = match cfg.models {
        ModelKind::Lda => vec!["LDA"],
        ModelKind::Rf => vec!["RF"],
        ModelKind::Both => vec!["LDA", "RF"],
    };

    let mut fold_metrics: Vec<(String, Vec<MetricSet>)> = model_names
        .iter()
        .map(|n| (n.to_string(), Vec::new()))
        .collect();

    for (fold_i, (train, val)) in plan.folds.iter().enumerate() {
        let pipeline = fit_pipeline(matrix, train, cfg, global_selection.as_ref())
            .map_err(|e| Error::Numerical(format!("fold {fold_i}: {e}")))?;
        for (name, scores) in fold_metrics.iter_mut() {
            scores.push(
                pipeline
                    .evaluate_model(name, matrix, val)
                    .map_err(|e| Error::Numerical(format!("fold {fold_i}: {e}")))?,
            );
        }
    }

    // Final refit on all non-holdout data; holdout is touched only here.
    let final_pipeline = fit_pipeline(matrix, &non_holdout, cfg, global_selection.as_ref())?;

    let mut rows = Vec::new();
    for (name, scores) in &fold_metrics {
        let (mean, std) = aggregate(scores);
        rows.push(ReportRow {
            label: format!("{name} (Validation set)"),
            mean,
            std: Some(std),
        });
    }
    for name in &model_names {
        let test = final_pipeline.evaluate_model(name, matrix, &plan.holdout)?;
        rows.push(ReportRow {
            label: format!("{name} (Test set)"),
            mean: test,
            std: None,
        });
    }

    Ok(EvalReport {
        rows,
        fold_metrics,
        selection: final_pipeline.selection,
        plan,
    })
}
