//! `annulus evaluate`: cross-validated evaluation with a fixed holdout.
//!
//! Writes four artifacts into the output directory: `metrics_report.csv`
//! (four labeled rows: LDA/RF × validation/test), `selection_report.csv`
//! (final MRMR ranking), `scatter.svg` (top-two features with the LDA
//! boundary) and `phases.svg` (per-phase cohort mean ± std of one feature
//! family).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, ValueEnum};

use annulus::evaluation::{run_cv, CvConfig, EvalReport, ModelKind, SelectionMode};
use annulus::features::FeatureMatrix;
use annulus::models::{lda_fit, RfHyperparams, Standardizer};
use annulus::{Error, Result, PHASES};

use crate::artifact;
use crate::svg::Plot;

use super::select::ranking_csv;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelectionChoice {
    PerFold,
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelsChoice {
    Lda,
    Rf,
    Both,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Input features CSV.
    #[arg(long)]
    pub features: PathBuf,
    /// Number of MRMR-selected features.
    #[arg(long, default_value_t = 25)]
    pub k: usize,
    /// Number of cross-validation folds.
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    /// Holdout (test) patients per class, excluded from CV.
    #[arg(long, default_value_t = 10)]
    pub holdout: usize,
    /// Root random seed (splits and random forest).
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Where MRMR runs: inside each fold (leakage-free) or once globally.
    #[arg(long, value_enum, default_value_t = SelectionChoice::PerFold)]
    pub selection: SelectionChoice,
    /// Which models to evaluate.
    #[arg(long, value_enum, default_value_t = ModelsChoice::Both)]
    pub models: ModelsChoice,
    /// Feature family plotted per phase (e.g. height, a, b, area).
    #[arg(long, default_value = "height")]
    pub plot_feature: String,
    /// Output directory.
    #[arg(long)]
    pub out_dir: PathBuf,
}

pub fn run(args: &EvaluateArgs) -> Result<ExitCode> {
    let matrix = FeatureMatrix::read_csv(&args.features)?;
    let cfg = CvConfig {
        k: args.k,
        folds: args.folds,
        holdout_per_class: args.holdout,
        seed: args.seed,
        selection: match args.selection {
            SelectionChoice::PerFold => SelectionMode::PerFold,
            SelectionChoice::Global => SelectionMode::Global,
        },
        models: match args.models {
            ModelsChoice::Lda => ModelKind::Lda,
            ModelsChoice::Rf => ModelKind::Rf,
            ModelsChoice::Both => ModelKind::Both,
        },
        rf_params: RfHyperparams::default(),
    };
    let report = run_cv(&matrix, &cfg)?;

    let config_repr = format!("{args:?}");
    let comments = artifact::provenance(args.seed, &config_repr);
    let comment_block = artifact::comment_block(args.seed, &config_repr);
    std::fs::create_dir_all(&args.out_dir)?;

    artifact::atomic_write(
        &args.out_dir.join("metrics_report.csv"),
        &metrics_csv(&report, &comment_block),
    )?;
    artifact::atomic_write(
        &args.out_dir.join("selection_report.csv"),
        &ranking_csv(&report.selection, &comment_block),
    )?;
    artifact::atomic_write(
        &args.out_dir.join("scatter.svg"),
        &scatter_plot(&matrix, &report, &comments)?,
    )?;
    artifact::atomic_write(
        &args.out_dir.join("phases.svg"),
        &phases_plot(&matrix, &args.plot_feature, &comments)?,
    )?;
    Ok(ExitCode::SUCCESS)
}

pub const METRICS_HEADER: &str = "row,accuracy,specificity,sensitivity,f1,auc,\
accuracy_std,specificity_std,sensitivity_std,f1_std,auc_std";

fn metrics_csv(report: &EvalReport, comment_block: &str) -> String {
    let mut out = String::from(comment_block);
    out.push_str(METRICS_HEADER);
    out.push('\n');
    for row in &report.rows {
        out.push_str(&row.label);
        for v in row.mean.values() {
            out.push_str(&format!(",{v}"));
        }
        match &row.std {
            Some(std) => {
                for v in std.values() {
                    out.push_str(&format!(",{v}"));
                }
            }
            None => out.push_str(",,,,,"),
        }
        out.push('\n');
    }
    out
}

/// Top-two MRMR features of every patient, with the two-feature LDA
/// decision boundary.
fn scatter_plot(matrix: &FeatureMatrix, report: &EvalReport, comments: &[String]) -> Result<String> {
    if report.selection.ranked.len() < 2 {
        return Err(Error::input("scatter plot needs at least 2 selected features"));
    }
    let fx = &report.selection.ranked[0];
    let fy = &report.selection.ranked[1];
    let xs = matrix.column(fx.index);
    let ys = matrix.column(fy.index);

    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let (x_range, y_range) = (range(&xs), range(&ys));

    let mut plot = Plot::new("Top two MRMR features", x_range, y_range);
    for ((&x, &y), &label) in xs.iter().zip(&ys).zip(&matrix.labels) {
        plot.point(x, y, class_color(label));
    }

    // Boundary of an LDA refit on just these two (standardized) features.
    let rows: Vec<Vec<f64>> = xs.iter().zip(&ys).map(|(&x, &y)| vec![x, y]).collect();
    let standardizer = Standardizer::fit(&rows)?;
    let lda = lda_fit(&standardizer.transform(&rows), &matrix.labels)?;
    let boundary: Vec<(f64, f64)> = (0..=100)
        .filter_map(|i| {
            let x = x_range.0 + (x_range.1 - x_range.0) * i as f64 / 100.0;
            boundary_y(&lda, &standardizer, x).map(|y| (x, y))
        })
        .filter(|&(_, y)| y >= y_range.0 && y <= y_range.1)
        .collect();
    if boundary.len() >= 2 {
        plot.polyline(&boundary, "#444");
    }
    plot.legend(&[("No MR", class_color(0)), ("MR", class_color(1))]);
    Ok(plot.finish(&fx.name, &fy.name, comments))
}

/// Solve w·z + c = 0 for the second standardized coordinate at a given
/// first raw coordinate; returns the raw-coordinate solution.
fn boundary_y(
    lda: &annulus::models::LdaModel,
    standardizer: &Standardizer,
    x: f64,
) -> Option<f64> {
    let (w0, w1) = (lda.weights[0], lda.weights[1]);
    if w1.abs() < 1e-12 * w0.abs().max(1.0) {
        return None;
    }
    let zx = if standardizer.stds[0] == 0.0 {
        0.0
    } else {
        (x - standardizer.means[0]) / standardizer.stds[0]
    };
    let zy = -(lda.intercept + w0 * zx) / w1;
    Some(standardizer.means[1] + zy * standardizer.stds[1])
}

/// Per-phase cohort mean ± std of one feature family (`<base>_CP<p>`).
fn phases_plot(matrix: &FeatureMatrix, base: &str, comments: &[String]) -> Result<String> {
    let columns: Vec<usize> = PHASES
        .iter()
        .map(|p| {
            let name = format!("{base}_CP{p}");
            matrix
                .names
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| Error::input(format!("unknown plot feature column {name:?}")))
        })
        .collect::<Result<_>>()?;

    let cohort_stats = |label: u8| -> Vec<(f64, f64)> {
        columns
            .iter()
            .map(|&j| {
                let values: Vec<f64> = matrix
                    .rows
                    .iter()
                    .zip(&matrix.labels)
                    .filter(|(_, &l)| l == label)
                    .map(|(r, _)| r[j])
                    .collect();
                let n = values.len().max(1) as f64;
                let mean = values.iter().sum::<f64>() / n;
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
                (mean, var.sqrt())
            })
            .collect()
    };
    let stats = [cohort_stats(0), cohort_stats(1)];

    let y_lo = stats
        .iter()
        .flatten()
        .map(|(m, s)| m - s)
        .fold(f64::INFINITY, f64::min);
    let y_hi = stats
        .iter()
        .flatten()
        .map(|(m, s)| m + s)
        .fold(f64::NEG_INFINITY, f64::max);

    let mut plot = Plot::new(
        &format!("{base} per cardiac phase (mean \u{b1} std)"),
        (0.0, 25.0),
        (y_lo, y_hi),
    );
    for (label, cohort) in stats.iter().enumerate() {
        let color = class_color(label as u8);
        let line: Vec<(f64, f64)> = PHASES
            .iter()
            .zip(cohort)
            .map(|(&p, &(m, _))| (f64::from(p), m))
            .collect();
        plot.polyline(&line, color);
        for (&p, &(m, s)) in PHASES.iter().zip(cohort) {
            plot.error_bar(f64::from(p), m, s, color);
        }
    }
    plot.legend(&[("No MR", class_color(0)), ("MR", class_color(1))]);
    Ok(plot.finish("cardiac phase", base, comments))
}

fn class_color(label: u8) -> &'static str {
    if label == 0 {
        "#1f77b4"
    } else {
        "#d62728"
    }
}
