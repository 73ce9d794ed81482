//! `annulus`: command-line pipeline for mitral-annulus landmark analysis.
//!
//! Subcommands cover the full workflow: `synth` (generate a deterministic
//! synthetic cohort), `extract` (landmarks → 187-feature CSV), `select`
//! (MRMR ranking), `train` (fit and save one model), `evaluate` (cross-
//! validated report + plots) and `report` (pretty-print a report).
//!
//! Exit codes: 0 success, 2 I/O, 3 schema violation, 4 bad data,
//! 5 numerical failure.

mod artifact;
mod commands;
mod svg;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use annulus::Error;

#[derive(Parser, Debug)]
#[command(name = "annulus", version, about = "Mitral-annulus landmark analysis pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract the 187-feature vector per patient from a landmark file.
    Extract(commands::extract::ExtractArgs),
    /// Rank features by MRMR on a feature CSV.
    Select(commands::select::SelectArgs),
    /// Train a single model on all rows of a feature CSV and save it.
    Train(commands::train::TrainArgs),
    /// Cross-validated evaluation with holdout: report, ranking and plots.
    Evaluate(commands::evaluate::EvaluateArgs),
    /// Generate a deterministic synthetic two-cohort dataset.
    Synth(commands::synth::SynthArgs),
    /// Pretty-print the metrics report from an evaluation directory.
    Report(commands::report::ReportArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Extract(args) => commands::extract::run(args),
        Command::Select(args) => commands::select::run(args),
        Command::Train(args) => commands::train::run(args),
        Command::Evaluate(args) => commands::evaluate::run(args),
        Command::Synth(args) => commands::synth::run(args),
        Command::Report(args) => commands::report::run(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}

fn error_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 2,
        Error::Schema(_) => 3,
        Error::Input(_) | Error::Degenerate(_) => 4,
        Error::Numerical(_) => 5,
    }
}
