//! End-to-end checks of the `cortex` binary against the bundled data.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cortex"))
}

fn repo_root() -> PathBuf {
    // crates/cortex-cli -> workspace root
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf()
}

fn write_prediction_file(dir: &Path, data_csv: &Path, target_idx: usize) -> PathBuf {
    // Echo the true labels as "black-box" predictions.
    let text = std::fs::read_to_string(data_csv).unwrap();
    let mut out = String::from("prediction\n");
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        out.push_str(cells[target_idx]);
        out.push('\n');
    }
    let path = dir.join("preds.csv");
    std::fs::write(&path, out).unwrap();
    path
}

#[test]
fn runs_experiment_on_bundled_data() {
    let root = repo_root();
    let data = root.join("data/synth_imbalanced_a.csv");
    let dir = tempfile::tempdir().unwrap();
    let preds = write_prediction_file(dir.path(), &data, 2);
    let out = dir.path().join("out");

    let output = bin()
        .args(["--data"])
        .arg(&data)
        .args(["--target", "cls", "--predictions"])
        .arg(&preds)
        .args([
            "--repeats",
            "3",
            "--seed",
            "7",
            "--format",
            "json,csv,text",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(out.join("report.json").exists());
    assert!(out.join("records.csv").exists());
    assert!(out.join("report.txt").exists());
    assert!(out.join("rules").join("cortex_run0000.rules").exists());

    let text = std::fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(text.contains("completeness"), "{text}");
    assert!(text.contains("(0.0000)"), "{text}");
}

#[test]
fn identical_configs_produce_identical_reports() {
    let root = repo_root();
    let data = root.join("data/synth_three_class.csv");
    let dir = tempfile::tempdir().unwrap();
    let preds = write_prediction_file(dir.path(), &data, 2);

    let out = dir.path().join("out");
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let status = bin()
            .args(["--data"])
            .arg(&data)
            .args(["--target", "cls", "--predictions"])
            .arg(&preds)
            .args(["--repeats", "2", "--seed", "11", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read_to_string(out.join("report.json")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn oracle_command_drives_the_pipeline() {
    let root = repo_root();
    let data = root.join("data/synth_imbalanced_a.csv");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");

    // Constant-class oracle: every surrogate collapses to a single leaf.
    let output = bin()
        .args(["--data"])
        .arg(&data)
        .args([
            "--target",
            "cls",
            "--oracle-cmd",
            "awk 'NR>1 {print \"maj\"}'",
            "--repeats",
            "2",
            "--methods",
            "cortex",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let rules = std::fs::read_to_string(out.join("rules/cortex_run0000.rules")).unwrap();
    assert_eq!(rules.trim(), "IF TRUE THEN class = maj");
}

#[test]
fn usage_errors_exit_with_code_one() {
    let output = bin().args(["--target", "cls"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("--data"), "{stderr}");
}

#[test]
fn data_errors_exit_with_code_two() {
    let output = bin()
        .args([
            "--data",
            "/nonexistent/nope.csv",
            "--target",
            "cls",
            "--oracle-cmd",
            "cat",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn oracle_errors_exit_with_code_three() {
    let root = repo_root();
    let data = root.join("data/synth_imbalanced_a.csv");
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["--data"])
        .arg(&data)
        .args([
            "--target",
            "cls",
            "--oracle-cmd",
            "cat > /dev/null; exit 9",
            "--repeats",
            "1",
            "--out",
        ])
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn config_file_with_flag_overrides() {
    let root = repo_root();
    let data = root.join("data/synth_imbalanced_a.csv");
    let dir = tempfile::tempdir().unwrap();
    let preds = write_prediction_file(dir.path(), &data, 2);
    let out = dir.path().join("out");

    let config = format!(
        r#"{{
  "data_path": {:?},
  "target": "cls",
  "predictor": {{"PredictionFile": {{"path": {:?}, "label_column": "prediction"}}}},
  "repeats": 5,
  "base_seed": 3
}}"#,
        data.to_str().unwrap(),
        preds.to_str().unwrap()
    );
    let config_path = dir.path().join("config.json");
    std::fs::write(&config_path, config).unwrap();

    // Flag overrides the file's repeats=5 down to 2.
    let output = bin()
        .args(["--config"])
        .arg(&config_path)
        .args(["--repeats", "2", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let report = std::fs::read_to_string(out.join("report.json")).unwrap();
    assert!(report.contains("\"repeats\": 2"), "flag must override config file");
}

#[test]
fn dump_encoded_writes_one_hot_columns() {
    let root = repo_root();
    let data = root.join("data/credit_toy.csv");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("encoded.csv");
    let status = bin()
        .args(["--data"])
        .arg(&data)
        .args(["--target", "cls", "--dump-encoded"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.contains("purpose=car"), "{header}");
    assert!(header.contains("housing=own"), "{header}");
}
