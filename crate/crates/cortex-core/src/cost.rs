//! Class-dependent misclassification cost matrices.
//!
//! Convention used everywhere in this crate: `C[i][j]` is the cost of
//! predicting class `j` for a sample whose actual class is `i` (row =
//! actual, column = predicted). A matrix is considered reasonable when
//! correct classification is strictly cheaper than any misclassification
//! in every row.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// K×K cost table, row = actual class, column = predicted class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostMatrix {
    costs: Vec<Vec<f64>>,
}

/// Outcome of [`CostMatrix::validate`].
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    /// `(actual, predicted)` pairs where the correct label is not strictly
    /// cheaper: `C[i][i] >= C[i][j]`.
    pub hard_violations: Vec<(usize, usize)>,
    /// `(dominating, dominated)` column pairs: predicting the dominated
    /// column never costs more than the dominating one, so the dominating
    /// class can never be an optimal prediction.
    pub dominated_columns: Vec<(usize, usize)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.hard_violations.is_empty()
    }

    pub fn warnings(&self) -> Vec<String> {
        self.dominated_columns
            .iter()
            .map(|(a, b)| {
                format!(
                    "column {a} dominates column {b}: predicting class {a} is never optimal"
                )
            })
            .collect()
    }
}

impl CostMatrix {
    /// Builds a matrix from rows, requiring a finite nonnegative K×K shape
    /// with K >= 2. Reasonableness is checked separately via `validate`.
    pub fn new(costs: Vec<Vec<f64>>) -> Result<Self> {
        let k = costs.len();
        if k < 2 {
            return Err(Error::Data(format!("cost matrix needs K >= 2 classes, got {k}")));
        }
        for (i, row) in costs.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Data(format!(
                    "cost matrix is not square: row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            for (j, &c) in row.iter().enumerate() {
                if !c.is_finite() || c < 0.0 {
                    return Err(Error::Data(format!(
                        "cost matrix entry [{i}][{j}] must be finite and >= 0, got {c}"
                    )));
                }
            }
        }
        Ok(CostMatrix { costs })
    }

    /// Default matrix from class counts: off-diagonal
    /// `C[i][j] = (N_i + N_j) / N_i`, diagonal forced to zero. Misclassifying
    /// a rarer class costs more than the reverse direction.
    pub fn default_from_counts(counts: &[usize]) -> Result<Self> {
        let k = counts.len();
        if k < 2 {
            return Err(Error::Data(format!("need at least 2 classes, got {k}")));
        }
        if let Some(i) = counts.iter().position(|&c| c == 0) {
            return Err(Error::Data(format!("empty class {i}: every class needs >= 1 sample")));
        }
        let costs = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            0.0
                        } else {
                            (counts[i] + counts[j]) as f64 / counts[i] as f64
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(CostMatrix { costs })
    }

    /// Uniform 0/1 matrix: zero diagonal, unit off-diagonal. Under this
    /// matrix cost-minimizing labels reduce to majority vote.
    pub fn unit(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Data(format!("need at least 2 classes, got {k}")));
        }
        let costs = (0..k)
            .map(|i| (0..k).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        Ok(CostMatrix { costs })
    }

    /// Parses a headerless K×K CSV of costs, rows in lexicographic class
    /// order, and rejects matrices with hard reasonableness violations.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_path(path)
            .map_err(|e| Error::Data(format!("cannot open cost matrix {}: {e}", path.display())))?;
        let mut costs = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record
                .map_err(|e| Error::Data(format!("bad cost matrix row {}: {e}", i + 1)))?;
            let row: Vec<f64> = record
                .iter()
                .map(|cell| {
                    cell.trim().parse::<f64>().map_err(|_| {
                        Error::Data(format!(
                            "non-numeric cost matrix cell {cell:?} in row {}",
                            i + 1
                        ))
                    })
                })
                .collect::<Result<_>>()?;
            costs.push(row);
        }
        let matrix = CostMatrix::new(costs)?;
        let report = matrix.validate();
        if !report.is_valid() {
            let (i, j) = report.hard_violations[0];
            return Err(Error::Data(format!(
                "cost matrix rejected: C[{i}][{i}] = {} is not cheaper than C[{i}][{j}] = {} \
                 (correct classification must cost strictly less than any error)",
                matrix.cost(i, i),
                matrix.cost(i, j)
            )));
        }
        Ok(matrix)
    }

    pub fn n_classes(&self) -> usize {
        self.costs.len()
    }

    /// Cost of predicting `predicted` when the actual class is `actual`.
    pub fn cost(&self, actual: usize, predicted: usize) -> f64 {
        self.costs[actual][predicted]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.costs
    }

    /// Errors unless the matrix matches the dataset's class count.
    pub fn ensure_classes(&self, k: usize) -> Result<()> {
        if self.n_classes() != k {
            return Err(Error::Data(format!(
                "cost matrix is {0}x{0} but the dataset has {k} classes",
                self.n_classes()
            )));
        }
        Ok(())
    }

    /// Checks the reasonableness conditions. Hard violations are rows where
    /// a misclassification is not strictly costlier than the correct label;
    /// column dominance is reported as a warning because such matrices are
    /// degenerate but still well-defined.
    pub fn validate(&self) -> ValidationReport {
        let k = self.n_classes();
        let mut report = ValidationReport::default();
        for i in 0..k {
            for j in 0..k {
                if j != i && self.costs[i][i] >= self.costs[i][j] {
                    report.hard_violations.push((i, j));
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                if a == b {
                    continue;
                }
                let ge_everywhere = (0..k).all(|i| self.costs[i][a] >= self.costs[i][b]);
                let strict_somewhere = (0..k).any(|i| self.costs[i][a] > self.costs[i][b]);
                if ge_everywhere && strict_somewhere {
                    report.dominated_columns.push((a, b));
                }
            }
        }
        report
    }

    /// Matrix scaled by a positive factor. Label decisions are invariant
    /// under positive scaling.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if factor <= 0.0 || !factor.is_finite() {
            return Err(Error::Config(format!("scale factor must be positive, got {factor}")));
        }
        CostMatrix::new(
            self.costs
                .iter()
                .map(|row| row.iter().map(|c| c * factor).collect())
                .collect(),
        )
    }
}

impl fmt::Display for CostMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.costs {
            let cells: Vec<String> = row.iter().map(|c| format!("{c:.4}")).collect();
            writeln!(f, "{}", cells.join(","))?;
        }
        Ok(())
    }
}
