//! `annulus report`: pretty-print `metrics_report.csv` from an evaluation
//! directory as an aligned table.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Args;

use annulus::{Error, Result};

use super::evaluate::METRICS_HEADER;

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Evaluation output directory (containing metrics_report.csv).
    #[arg(long)]
    pub from: PathBuf,
}

pub fn run(args: &ReportArgs) -> Result<ExitCode> {
    let path = args.from.join("metrics_report.csv");
    let text = std::fs::read_to_string(&path)?;
    print!("{}", render(&text)?);
    Ok(ExitCode::SUCCESS)
}

fn render(csv: &str) -> Result<String> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#') && !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::schema("metrics report is empty"))?;
    if header != METRICS_HEADER {
        return Err(Error::schema("unrecognized metrics report header"));
    }
    let metric_names = ["accuracy", "specificity", "sensitivity", "F1", "AUC"];

    let mut out = format!("{:<22}", "");
    for name in metric_names {
        out.push_str(&format!("{name:>16}"));
    }
    out.push('\n');

    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(Error::schema(format!("bad metrics row: {line:?}")));
        }
        out.push_str(&format!("{:<22}", fields[0]));
        for m in 0..5 {
            let mean: f64 = fields[1 + m]
                .parse()
                .map_err(|_| Error::schema(format!("bad metric value {:?}", fields[1 + m])))?;
            let cell = if fields[6 + m].is_empty() {
                format!("{mean:.2}")
            } else {
                let std: f64 = fields[6 + m]
                    .parse()
                    .map_err(|_| Error::schema(format!("bad metric std {:?}", fields[6 + m])))?;
                format!("{mean:.2} \u{b1} {std:.2}")
            };
            out.push_str(&format!("{cell:>16}"));
        }
        out.push('\n');
    }
    Ok(out)
}
