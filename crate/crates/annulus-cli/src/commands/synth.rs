//! `annulus synth`: deterministic synthetic two-cohort dataset.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Args;

use annulus::ingest::{write_dataset, FileMeta};
use annulus::synth::{generate_cohorts, CohortSpec};
use annulus::Result;

use crate::artifact;

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Patients per cohort (No-MR and MR).
    #[arg(long, default_value_t = 100)]
    pub n_per_class: usize,
    /// Isotropic landmark noise sigma, mm.
    #[arg(long, default_value_t = 1.0)]
    pub noise_mm: f64,
    /// Root random seed.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output directory (landmarks.json + ground_truth.csv).
    #[arg(long)]
    pub out_dir: PathBuf,
}

pub fn run(args: &SynthArgs) -> Result<ExitCode> {
    let no_mr = CohortSpec::default_no_mr(args.n_per_class, args.noise_mm);
    let mr = CohortSpec::default_mr(args.n_per_class, args.noise_mm);
    let mut output = generate_cohorts(&no_mr, &mr, args.seed)?;

    let config_repr = format!("{args:?}");
    output.landmarks.meta = Some(FileMeta {
        tool_version: artifact::TOOL_VERSION.to_string(),
        seed: args.seed,
        config_hash: artifact::config_hash(&config_repr),
    });

    std::fs::create_dir_all(&args.out_dir)?;
    artifact::atomic_write(
        &args.out_dir.join("landmarks.json"),
        &write_dataset(&output.landmarks),
    )?;
    let gt = output.ground_truth_matrix();
    artifact::atomic_write(
        &args.out_dir.join("ground_truth.csv"),
        &gt.to_csv(&artifact::provenance(args.seed, &config_repr)),
    )?;
    Ok(ExitCode::SUCCESS)
}
