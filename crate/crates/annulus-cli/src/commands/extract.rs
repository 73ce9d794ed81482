//! `annulus extract`: landmark file → features CSV.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Args;

use annulus::features::{extract_features, FeatureMatrix};
use annulus::geometry::register_patient;
use annulus::ingest::parse_dataset_lenient;
use annulus::{Error, Result};

use crate::artifact;

#[derive(Args, Debug)]
pub struct ExtractArgs {
    /// Landmark file (schema annulus-landmarks/1).
    #[arg(long)]
    pub landmarks: PathBuf,
    /// Output features CSV (187 feature columns + patient_id + label).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &ExtractArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.landmarks)?;
    let (sets, mut failures) = parse_dataset_lenient(&text)?;

    let mut vectors = Vec::new();
    for set in &sets {
        let features = register_patient(set)
            .and_then(|phases| extract_features(&set.patient_id, set.label, &phases));
        match features {
            Ok(v) => vectors.push(v),
            Err(e) => failures.push((set.patient_id.clone(), e)),
        }
    }
    for (id, e) in &failures {
        eprintln!("extract: skipping patient {id}: {e}");
    }
    if vectors.is_empty() {
        return Err(Error::input("extract: no patient could be processed"));
    }

    let matrix = FeatureMatrix::from_vectors(&vectors);
    let comments = artifact::provenance(0, &format!("{args:?}"));
    artifact::atomic_write(&args.out, &matrix.to_csv(&comments))?;

    if failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "extract: wrote {} of {} patients",
            vectors.len(),
            vectors.len() + failures.len()
        );
        Ok(ExitCode::from(4))
    }
}
