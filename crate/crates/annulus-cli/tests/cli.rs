//! End-to-end tests of the `annulus` binary: pipeline wiring, exit codes,
//! artifact provenance and bitwise determinism.

use std::path::Path;
use std::process::{Command, Output};

fn annulus(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_annulus"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Generate a small cohort and run it through the whole pipeline.
fn run_pipeline(dir: &Path, seed: u64) {
    assert_exit(
        &annulus(
            &[
                "synth",
                "--n-per-class",
                "16",
                "--noise-mm",
                "1.0",
                "--seed",
                &seed.to_string(),
                "--out-dir",
                "data",
            ],
            dir,
        ),
        0,
    );
    assert_exit(
        &annulus(
            &["extract", "--landmarks", "data/landmarks.json", "--out", "features.csv"],
            dir,
        ),
        0,
    );
    assert_exit(
        &annulus(
            &[
                "evaluate",
                "--features",
                "features.csv",
                "--k",
                "10",
                "--folds",
                "3",
                "--holdout",
                "3",
                "--seed",
                &seed.to_string(),
                "--out-dir",
                "eval",
            ],
            dir,
        ),
        0,
    );
    assert_exit(
        &annulus(
            &[
                "train",
                "--features",
                "features.csv",
                "--model",
                "rf",
                "--k",
                "10",
                "--seed",
                &seed.to_string(),
                "--out",
                "model.json",
            ],
            dir,
        ),
        0,
    );
}

#[test]
fn pipeline_produces_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    run_pipeline(dir.path(), 42);

    let features = read(&dir.path().join("features.csv"));
    assert!(features.contains("# tool_version: "));
    assert!(features.contains("# config_hash: "));
    let data_rows = features
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .count();
    assert_eq!(data_rows, 1 + 32); // header + 16 per class
    let header = features.lines().find(|l| l.starts_with("patient_id")).unwrap();
    assert_eq!(header.split(',').count(), 189); // id + label + 187 features

    let metrics = read(&dir.path().join("eval/metrics_report.csv"));
    for label in [
        "LDA (Validation set)",
        "RF (Validation set)",
        "LDA (Test set)",
        "RF (Test set)",
    ] {
        assert!(metrics.contains(label), "missing row {label}");
    }
    assert!(metrics.contains("# seed: 42"));

    let ranking = read(&dir.path().join("eval/selection_report.csv"));
    assert!(ranking.contains("rank,feature,f_statistic,mrmr_score"));
    assert_eq!(
        ranking.lines().filter(|l| !l.starts_with('#')).count(),
        1 + 10
    );

    for plot in ["eval/scatter.svg", "eval/phases.svg"] {
        let svg = read(&dir.path().join(plot));
        assert!(svg.starts_with("<?xml"), "{plot} is not SVG");
        assert!(svg.contains("seed: 42"), "{plot} lacks provenance");
    }

    let model = read(&dir.path().join("model.json"));
    assert!(model.contains("\"schema\": \"annulus-model/1\""));
    assert!(model.contains("\"config_hash\""));

    let report = annulus(&["report", "--from", "eval"], dir.path());
    assert_exit(&report, 0);
    let table = String::from_utf8(report.stdout).unwrap();
    assert!(table.contains("LDA (Validation set)"));
    assert!(table.contains('\u{b1}'));
}

#[test]
fn identical_seeds_give_bitwise_identical_artifacts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_pipeline(a.path(), 7);
    run_pipeline(b.path(), 7);
    for file in [
        "data/landmarks.json",
        "data/ground_truth.csv",
        "features.csv",
        "model.json",
        "eval/metrics_report.csv",
        "eval/selection_report.csv",
        "eval/scatter.svg",
        "eval/phases.svg",
    ] {
        assert_eq!(
            read(&a.path().join(file)),
            read(&b.path().join(file)),
            "artifact {file} differs between identical runs"
        );
    }
}

#[test]
fn extract_skips_corrupt_patients_and_signals_partial_failure() {
    let dir = tempfile::tempdir().unwrap();
    assert_exit(
        &annulus(
            &["synth", "--n-per-class", "4", "--noise-mm", "0.5", "--seed", "1", "--out-dir", "data"],
            dir.path(),
        ),
        0,
    );
    // Corrupt the first patient: renaming its first point leaves noMR_000
    // with a duplicate P1 and no P0 at phase 0.
    let landmarks = dir.path().join("data/landmarks.json");
    let text = read(&landmarks).replacen("\"name\": \"P0\"", "\"name\": \"P1\"", 1);
    std::fs::write(&landmarks, text).unwrap();

    let out = annulus(
        &["extract", "--landmarks", "data/landmarks.json", "--out", "features.csv"],
        dir.path(),
    );
    assert_exit(&out, 4);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("noMR_000"), "stderr: {stderr}");

    let features = read(&dir.path().join("features.csv"));
    let data_rows = features
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("patient_id") && !l.is_empty())
        .count();
    assert_eq!(data_rows, 7); // 8 patients minus the corrupt one
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // missing input file -> I/O
    let out = annulus(
        &["extract", "--landmarks", "nope.json", "--out", "f.csv"],
        dir.path(),
    );
    assert_exit(&out, 2);

    // structurally invalid landmark file -> schema
    std::fs::write(dir.path().join("bad.json"), "{\"schema\": \"wrong/9\"}").unwrap();
    let out = annulus(
        &["extract", "--landmarks", "bad.json", "--out", "f.csv"],
        dir.path(),
    );
    assert_exit(&out, 3);

    // single-class feature data -> data error
    let mut csv = String::from("patient_id,label,f0,f1\n");
    for i in 0..12 {
        csv.push_str(&format!("p{i},0,{i}.5,1.0\n"));
    }
    std::fs::write(dir.path().join("oneclass.csv"), csv).unwrap();
    let out = annulus(
        &[
            "evaluate",
            "--features",
            "oneclass.csv",
            "--k",
            "2",
            "--folds",
            "2",
            "--holdout",
            "1",
            "--out-dir",
            "eval",
        ],
        dir.path(),
    );
    assert_exit(&out, 4);
}
