//! `annulus train`: fit one model on every row of a feature CSV.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, ValueEnum};

use annulus::features::FeatureMatrix;
use annulus::models::{
    lda_fit, rf_fit, RfHyperparams, SavedModel, Standardizer, TrainedModel,
};
use annulus::selection::mrmr_select;
use annulus::Result;

use crate::artifact;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Lda,
    Rf,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Input features CSV.
    #[arg(long)]
    pub features: PathBuf,
    /// Which model to fit.
    #[arg(long, value_enum)]
    pub model: ModelChoice,
    /// Number of MRMR-selected features the model sees.
    #[arg(long, default_value_t = 25)]
    pub k: usize,
    /// Root random seed (random-forest bootstraps and splits).
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output model file.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &TrainArgs) -> Result<ExitCode> {
    let matrix = FeatureMatrix::read_csv(&args.features)?;
    let columns: Vec<Vec<f64>> = (0..matrix.n_features()).map(|j| matrix.column(j)).collect();
    let selection = mrmr_select(&columns, &matrix.names, &matrix.labels, args.k)?;

    let selected = selection.indices();
    let names: Vec<String> = selection.ranked.iter().map(|f| f.name.clone()).collect();
    let rows: Vec<Vec<f64>> = matrix
        .rows
        .iter()
        .map(|r| selected.iter().map(|&j| r[j]).collect())
        .collect();

    let standardizer = Standardizer::fit(&rows)?;
    let model = match args.model {
        ModelChoice::Lda => TrainedModel::Lda(lda_fit(
            &standardizer.transform(&rows),
            &matrix.labels,
        )?),
        ModelChoice::Rf => TrainedModel::Rf(rf_fit(
            &rows,
            &matrix.labels,
            &names,
            &RfHyperparams::default(),
            args.seed,
        )?),
    };

    let mut saved = SavedModel::new(args.seed, standardizer, names, model);
    saved.tool_version = artifact::TOOL_VERSION.to_string();
    saved.config_hash = artifact::config_hash(&format!("{args:?}"));
    artifact::atomic_write(&args.out, &saved.to_text())?;
    Ok(ExitCode::SUCCESS)
}
