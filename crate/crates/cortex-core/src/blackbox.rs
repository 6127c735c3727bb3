//! Black-box prediction sources for surrogate training.
//!
//! The model being explained stays external: predictions come either from a
//! CSV file aligned with the dataset rows or from a subprocess oracle. The
//! subprocess wire protocol is line-oriented text so oracles can be written
//! in any language: the parent writes a UTF-8 CSV (header of feature names,
//! `\n` line endings, `.` decimals) to the child's stdin and closes it; the
//! child must write exactly one class name per data row to stdout,
//! `\n`-terminated, and exit 0. Any deviation is a hard error.

use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::sync::mpsc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Where black-box predictions come from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum PredictorSource {
    /// CSV file with a header; the named column holds one class name per
    /// evaluation sample, row-aligned.
    PredictionFile { path: PathBuf, label_column: String },
    /// Command line run through `sh -c`, speaking the stdin/stdout protocol
    /// described in the module docs.
    SubprocessOracle {
        command: String,
        workdir: Option<PathBuf>,
        timeout_secs: u64,
    },
}

impl PredictorSource {
    pub fn describe(&self) -> String {
        match self {
            PredictorSource::PredictionFile { path, label_column } => {
                format!("prediction file {} (column {label_column:?})", path.display())
            }
            PredictorSource::SubprocessOracle { command, .. } => {
                format!("subprocess oracle {command:?}")
            }
        }
    }
}

/// One class index per sample, in sample order.
pub fn get_predictions(source: &PredictorSource, samples: &Dataset) -> Result<Vec<usize>> {
    match source {
        PredictorSource::PredictionFile { path, label_column } => {
            read_prediction_file(path, label_column, samples)
        }
        PredictorSource::SubprocessOracle {
            command,
            workdir,
            timeout_secs,
        } => run_oracle(command, workdir.as_deref(), *timeout_secs, samples),
    }
}

fn map_class_names(names: &[String], samples: &Dataset, origin: &str) -> Result<Vec<usize>> {
    if names.len() != samples.n_rows() {
        return Err(Error::Oracle(format!(
            "{origin} produced {} prediction(s) for {} sample(s)",
            names.len(),
            samples.n_rows()
        )));
    }
    names
        .iter()
        .map(|name| {
            samples.schema().class_index(name).ok_or_else(|| {
                Error::Oracle(format!(
                    "{origin} produced unknown class name {name:?}; known classes: {:?}",
                    samples.schema().classes
                ))
            })
        })
        .collect()
}

fn read_prediction_file(
    path: &std::path::Path,
    label_column: &str,
    samples: &Dataset,
) -> Result<Vec<usize>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Oracle(format!("cannot open prediction file {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Oracle(format!("bad prediction file header: {e}")))?;
    let col = headers
        .iter()
        .position(|h| h.trim() == label_column)
        .ok_or_else(|| {
            Error::Oracle(format!(
                "prediction file {} has no column {label_column:?}",
                path.display()
            ))
        })?;
    let mut names = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Oracle(format!("bad prediction row: {e}")))?;
        let cell = record
            .get(col)
            .ok_or_else(|| Error::Oracle("short prediction row".into()))?;
        names.push(cell.trim().to_string());
    }
    map_class_names(&names, samples, "prediction file")
}

/// Feature CSV in the oracle wire format.
pub fn oracle_input_csv(samples: &Dataset) -> String {
    let mut out = String::new();
    out.push_str(&samples.schema().feature_names().join(","));
    out.push('\n');
    for row in samples.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn run_oracle(
    command: &str,
    workdir: Option<&std::path::Path>,
    timeout_secs: u64,
    samples: &Dataset,
) -> Result<Vec<usize>> {
    let mut cmd = Command::new("sh");
    cmd.arg("-c")
        .arg(command)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    if let Some(dir) = workdir {
        cmd.current_dir(dir);
    }
    let mut child = cmd
        .spawn()
        .map_err(|e| Error::Oracle(format!("cannot spawn oracle {command:?}: {e}")))?;

    let input = oracle_input_csv(samples);
    let mut stdin = child.stdin.take().expect("piped stdin");
    let writer = std::thread::spawn(move || {
        // A write error here surfaces as a short/missing output below.
        let _ = stdin.write_all(input.as_bytes());
        drop(stdin);
    });

    let stdout = child.stdout.take().expect("piped stdout");
    let (tx, rx) = mpsc::channel();
    let reader = std::thread::spawn(move || {
        let mut lines = Vec::new();
        for line in BufReader::new(stdout).lines() {
            match line {
                Ok(l) => lines.push(l),
                Err(e) => {
                    let _ = tx.send(Err(format!("oracle stdout read failed: {e}")));
                    return;
                }
            }
        }
        let _ = tx.send(Ok(lines));
    });

    let outcome = rx.recv_timeout(Duration::from_secs(timeout_secs));
    let lines = match outcome {
        Ok(Ok(lines)) => lines,
        Ok(Err(msg)) => {
            let _ = child.kill();
            let _ = child.wait();
            return Err(Error::Oracle(msg));
        }
        Err(_) => {
            let _ = child.kill();
            let _ = child.wait();
            return Err(Error::Oracle(format!(
                "oracle {command:?} timed out after {timeout_secs}s"
            )));
        }
    };
    let _ = writer.join();
    let _ = reader.join();
    let status = child
        .wait()
        .map_err(|e| Error::Oracle(format!("oracle wait failed: {e}")))?;
    if !status.success() {
        return Err(Error::Oracle(format!(
            "oracle {command:?} exited with status {status}"
        )));
    }
    let names: Vec<String> = lines.iter().map(|l| l.trim().to_string()).collect();
    map_class_names(&names, samples, "oracle")
}
