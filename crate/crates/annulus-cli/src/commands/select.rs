//! `annulus select`: MRMR feature ranking of a feature CSV.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Args;

use annulus::features::FeatureMatrix;
use annulus::selection::{mrmr_select, SelectionResult};
use annulus::Result;

use crate::artifact;

#[derive(Args, Debug)]
pub struct SelectArgs {
    /// Input features CSV.
    #[arg(long)]
    pub features: PathBuf,
    /// Number of features to rank.
    #[arg(long, default_value_t = 25)]
    pub k: usize,
    /// Output ranking CSV.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &SelectArgs) -> Result<ExitCode> {
    let matrix = FeatureMatrix::read_csv(&args.features)?;
    let columns: Vec<Vec<f64>> = (0..matrix.n_features()).map(|j| matrix.column(j)).collect();
    let selection = mrmr_select(&columns, &matrix.names, &matrix.labels, args.k)?;

    let text = ranking_csv(&selection, &artifact::comment_block(0, &format!("{args:?}")));
    artifact::atomic_write(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

pub fn ranking_csv(selection: &SelectionResult, comment_block: &str) -> String {
    let mut out = String::from(comment_block);
    out.push_str("rank,feature,f_statistic,mrmr_score\n");
    for (rank, f) in selection.ranked.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            rank + 1,
            f.name,
            f.relevance,
            f.mrmr_score
        ));
    }
    out
}
