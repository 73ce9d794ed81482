//! Stratified splitting, cross-validation, and classification metrics.

mod cv;
mod metrics;
mod split;

pub use cv::{run_cv, CvConfig, EvalReport, FittedPipeline, MetricSet, ModelKind, ReportRow, SelectionMode};
pub use metrics::{confusion_metrics, roc_auc, ConfusionMetrics};
pub use split::{stratified_split, SplitPlan};
