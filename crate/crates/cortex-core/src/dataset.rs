//! Tabular data ingestion: CSV loading, one-hot encoding, reproducible
//! train/test splits, and Gaussian perturbation for robustness checks.
//!
//! Categorical columns are detected by parsing: a column where every cell
//! parses as a decimal number is numeric, a column where no cell parses is
//! categorical, and anything in between is rejected as a mixed column.
//! One-hot categories and class labels are ordered lexicographically so the
//! encoding is identical across runs and platforms.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw CSV contents before encoding: all cells kept as text.
#[derive(Debug, Clone)]
pub struct RawTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub target: String,
}

impl RawTable {
    /// Builds a table and checks its invariants: rectangular shape, target
    /// column present, at least two rows and two distinct target values.
    pub fn new(columns: Vec<String>, rows: Vec<Vec<String>>, target: &str) -> Result<Self> {
        let target_idx = columns
            .iter()
            .position(|c| c == target)
            .ok_or_else(|| Error::Data(format!("target column not found: {target:?}")))?;
        if rows.is_empty() {
            return Err(Error::Data("empty table: no data rows".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::Data(format!(
                    "ragged row {}: expected {} cells, found {}",
                    i + 1,
                    columns.len(),
                    row.len()
                )));
            }
            for (j, cell) in row.iter().enumerate() {
                if cell.is_empty() {
                    return Err(Error::Data(format!(
                        "missing value at row {}, column {:?}",
                        i + 1,
                        columns[j]
                    )));
                }
            }
        }
        let distinct: BTreeSet<&str> = rows.iter().map(|r| r[target_idx].as_str()).collect();
        if distinct.len() < 2 {
            return Err(Error::Data(format!(
                "target column {target:?} has {} distinct value(s); need at least 2",
                distinct.len()
            )));
        }
        Ok(RawTable {
            columns,
            rows,
            target: target.to_string(),
        })
    }

    fn target_index(&self) -> usize {
        self.columns.iter().position(|c| c == &self.target).unwrap()
    }
}

/// Loads an RFC-4180-style CSV (UTF-8, header row, `.` decimals) and marks
/// one column as the classification target.
pub fn load_csv(path: impl AsRef<Path>, target: &str) -> Result<RawTable> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Data(format!("cannot open {}: {e}", path.display())),
            _ => Error::Data(format!("cannot parse {}: {e}", path.display())),
        })?;
    let columns: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Data(format!("bad header in {}: {e}", path.display())))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Data(format!("bad row in {}: {e}", path.display())))?;
        rows.push(record.iter().map(|c| c.trim().to_string()).collect());
    }
    RawTable::new(columns, rows, target)
}

/// How an encoded feature column was produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureKind {
    /// Passed through from a numeric source column.
    Numeric,
    /// 0/1 indicator derived from one category of a text column.
    OneHot { source: String, category: String },
}

/// A single encoded feature column.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Feature {
    /// Display name: the source column for numeric features,
    /// `source=category` for one-hot columns.
    pub name: String,
    pub kind: FeatureKind,
}

/// Bookkeeping that ties encoded columns and class indices back to the raw
/// table. Class indices are assigned by lexicographic order of class names.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub features: Vec<Feature>,
    /// Class names in index order; index k is class k everywhere.
    pub classes: Vec<String>,
    pub target: String,
}

impl FeatureSchema {
    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == name)
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.features.iter().map(|f| f.name.clone()).collect()
    }

    /// Schema for data that never went through `encode`: features named
    /// `x0..x{p-1}`, classes named `0..k-1`. Used when fitting trees on
    /// matrices built in code.
    pub fn synthetic(n_features: usize, n_classes: usize) -> Self {
        FeatureSchema {
            features: (0..n_features)
                .map(|j| Feature {
                    name: format!("x{j}"),
                    kind: FeatureKind::Numeric,
                })
                .collect(),
            classes: (0..n_classes).map(|k| k.to_string()).collect(),
            target: "class".into(),
        }
    }
}

/// Encoded numeric feature table with class labels.
///
/// Immutable after construction; cheap to share across threads.
#[derive(Debug, Clone)]
pub struct Dataset {
    /// Row-major n×p feature matrix.
    matrix: Vec<f64>,
    n_rows: usize,
    n_features: usize,
    labels: Vec<usize>,
    schema: Arc<FeatureSchema>,
    class_counts: Vec<usize>,
}

impl Dataset {
    /// Builds a dataset from rows, checking shape and label-range invariants.
    pub fn from_rows(
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
        schema: Arc<FeatureSchema>,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Data("dataset must contain at least one row".into()));
        }
        if rows.len() != labels.len() {
            return Err(Error::Data(format!(
                "row/label count mismatch: {} rows, {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let p = schema.n_features();
        if p == 0 {
            return Err(Error::Data("dataset must have at least one feature".into()));
        }
        let k = schema.n_classes();
        let mut matrix = Vec::with_capacity(rows.len() * p);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != p {
                return Err(Error::Data(format!(
                    "row {i} has {} features, schema has {p}",
                    row.len()
                )));
            }
            matrix.extend_from_slice(row);
        }
        let mut class_counts = vec![0usize; k];
        for &y in &labels {
            if y >= k {
                return Err(Error::Data(format!("label {y} out of range for {k} classes")));
            }
            class_counts[y] += 1;
        }
        Ok(Dataset {
            matrix,
            n_rows: rows.len(),
            n_features: p,
            labels,
            schema,
            class_counts,
        })
    }

    /// Convenience constructor with a synthetic schema.
    pub fn from_parts(rows: Vec<Vec<f64>>, labels: Vec<usize>, n_classes: usize) -> Result<Self> {
        let p = rows.first().map(|r| r.len()).unwrap_or(0);
        Self::from_rows(rows, labels, Arc::new(FeatureSchema::synthetic(p, n_classes)))
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.schema.n_classes()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_counts(&self) -> &[usize] {
        &self.class_counts
    }

    pub fn schema(&self) -> &Arc<FeatureSchema> {
        &self.schema
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.matrix[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.n_features + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.matrix.chunks_exact(self.n_features)
    }

    /// Dataset with the same features but different labels (used to target
    /// surrogates at black-box predictions). Class counts are recomputed.
    pub fn with_labels(&self, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != self.n_rows {
            return Err(Error::Data(format!(
                "label count {} does not match row count {}",
                labels.len(),
                self.n_rows
            )));
        }
        let k = self.n_classes();
        let mut class_counts = vec![0usize; k];
        for &y in &labels {
            if y >= k {
                return Err(Error::Data(format!("label {y} out of range for {k} classes")));
            }
            class_counts[y] += 1;
        }
        Ok(Dataset {
            matrix: self.matrix.clone(),
            n_rows: self.n_rows,
            n_features: self.n_features,
            labels,
            schema: Arc::clone(&self.schema),
            class_counts,
        })
    }

    /// Rows selected by index, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Data("cannot take an empty subset".into()));
        }
        let rows: Vec<Vec<f64>> = indices.iter().map(|&i| self.row(i).to_vec()).collect();
        let labels: Vec<usize> = indices.iter().map(|&i| self.labels[i]).collect();
        Self::from_rows(rows, labels, Arc::clone(&self.schema))
    }

    /// Per-feature population standard deviation. Used as the per-feature
    /// noise scale for perturbation, so sigma is unit-free.
    pub fn feature_stds(&self) -> Vec<f64> {
        let n = self.n_rows as f64;
        (0..self.n_features)
            .map(|j| {
                let mean = (0..self.n_rows).map(|i| self.value(i, j)).sum::<f64>() / n;
                let var = (0..self.n_rows)
                    .map(|i| {
                        let d = self.value(i, j) - mean;
                        d * d
                    })
                    .sum::<f64>()
                    / n;
                var.sqrt()
            })
            .collect()
    }

    /// Writes the encoded table back out as CSV, one-hot columns named
    /// `source=category`, target column last.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let io_err = |e: std::io::Error| Error::Data(format!("cannot write encoded csv: {e}"));
        let mut header: Vec<String> = self.schema.feature_names();
        header.push(self.schema.target.clone());
        writeln!(out, "{}", header.join(",")).map_err(io_err)?;
        for i in 0..self.n_rows {
            let mut cells: Vec<String> = self.row(i).iter().map(|v| format!("{v}")).collect();
            cells.push(self.schema.classes[self.labels[i]].clone());
            writeln!(out, "{}", cells.join(",")).map_err(io_err)?;
        }
        Ok(())
    }
}

fn parse_decimal(cell: &str) -> Option<f64> {
    let v: f64 = cell.parse().ok()?;
    v.is_finite().then_some(v)
}

/// Encodes a raw table into a numeric dataset.
///
/// Columns where every cell parses as a decimal number pass through; columns
/// where no cell parses become one-hot blocks with categories in
/// lexicographic order; columns with a mix of parseable and unparseable
/// cells are rejected. Class labels map to 0..K-1 in lexicographic order.
pub fn encode(raw: &RawTable) -> Result<Dataset> {
    let target_idx = raw.target_index();

    let classes: Vec<String> = raw
        .rows
        .iter()
        .map(|r| r[target_idx].clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let labels: Vec<usize> = raw
        .rows
        .iter()
        .map(|r| classes.binary_search(&r[target_idx]).unwrap())
        .collect();

    let mut features = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (j, name) in raw.columns.iter().enumerate() {
        if j == target_idx {
            continue;
        }
        let parsed: Vec<Option<f64>> = raw.rows.iter().map(|r| parse_decimal(&r[j])).collect();
        let n_numeric = parsed.iter().filter(|v| v.is_some()).count();
        if n_numeric == raw.rows.len() {
            features.push(Feature {
                name: name.clone(),
                kind: FeatureKind::Numeric,
            });
            columns.push(parsed.into_iter().map(|v| v.unwrap()).collect());
        } else if n_numeric == 0 {
            let categories: Vec<String> = raw
                .rows
                .iter()
                .map(|r| r[j].clone())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            for cat in &categories {
                features.push(Feature {
                    name: format!("{name}={cat}"),
                    kind: FeatureKind::OneHot {
                        source: name.clone(),
                        category: cat.clone(),
                    },
                });
                columns.push(
                    raw.rows
                        .iter()
                        .map(|r| if &r[j] == cat { 1.0 } else { 0.0 })
                        .collect(),
                );
            }
        } else {
            return Err(Error::Data(format!(
                "mixed column {name:?}: {n_numeric} of {} cells parse as numbers; \
                 refusing to coerce",
                raw.rows.len()
            )));
        }
    }
    if features.is_empty() {
        return Err(Error::Data("no feature columns besides the target".into()));
    }

    let schema = Arc::new(FeatureSchema {
        features,
        classes,
        target: raw.target.clone(),
    });
    let n = raw.rows.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| columns.iter().map(|col| col[i]).collect())
        .collect();
    Dataset::from_rows(rows, labels, schema)
}

/// `floor(count * fraction)` with a tolerance for decimal fractions that are
/// not exactly representable: 90 * 0.7 must floor to 63, not 62.
fn floor_fraction(count: usize, fraction: f64) -> usize {
    (count as f64 * fraction + 1e-9).floor() as usize
}

/// Index partition behind [`split`]; exposed so callers that need row
/// provenance (e.g. aligning external prediction files) can reuse it.
pub fn split_indices(
    data: &Dataset,
    train_fraction: f64,
    seed: u64,
    stratified: bool,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Config(format!(
            "train fraction must be in (0,1), got {train_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    if stratified {
        for (k, &count) in data.class_counts().iter().enumerate() {
            if count == 1 {
                return Err(Error::Data(format!(
                    "class {:?} has a single sample; stratified split needs at least 2",
                    data.schema.classes[k]
                )));
            }
        }
        // Per class: floor(count * fraction) to train, clamped so both sides
        // keep at least one sample; remainder to test.
        for k in 0..data.n_classes() {
            let mut members: Vec<usize> =
                (0..data.n_rows()).filter(|&i| data.labels[i] == k).collect();
            if members.is_empty() {
                continue;
            }
            members.shuffle(&mut rng);
            let count = members.len();
            let take = floor_fraction(count, train_fraction).clamp(1, count - 1);
            train.extend_from_slice(&members[..take]);
            test.extend_from_slice(&members[take..]);
        }
    } else {
        let mut all: Vec<usize> = (0..data.n_rows()).collect();
        all.shuffle(&mut rng);
        let take = floor_fraction(data.n_rows(), train_fraction).clamp(1, data.n_rows() - 1);
        train.extend_from_slice(&all[..take]);
        test.extend_from_slice(&all[take..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Disjoint train/test partition, deterministic per
/// (data, fraction, seed, stratified).
pub fn split(
    data: &Dataset,
    train_fraction: f64,
    seed: u64,
    stratified: bool,
) -> Result<(Dataset, Dataset)> {
    let (train_idx, test_idx) = split_indices(data, train_fraction, seed, stratified)?;
    Ok((data.subset(&train_idx)?, data.subset(&test_idx)?))
}

/// Adds zero-mean Gaussian noise with standard deviation
/// `sigma * feature_scales[j]` to each cell. Labels are untouched and the
/// draw sequence is fixed per seed, so results are reproducible.
pub fn perturb(data: &Dataset, sigma: f64, feature_scales: &[f64], seed: u64) -> Result<Dataset> {
    if sigma < 0.0 || !sigma.is_finite() {
        return Err(Error::Config(format!("sigma must be finite and >= 0, got {sigma}")));
    }
    if feature_scales.len() != data.n_features() {
        return Err(Error::Data(format!(
            "feature_scales has length {}, dataset has {} features",
            feature_scales.len(),
            data.n_features()
        )));
    }
    if let Some(s) = feature_scales.iter().find(|s| !s.is_finite() || **s < 0.0) {
        return Err(Error::Data(format!("feature scale must be finite and >= 0, got {s}")));
    }
    let mut out = data.clone();
    if sigma == 0.0 {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    for i in 0..data.n_rows() {
        for (j, &scale) in feature_scales.iter().enumerate() {
            // One draw per cell regardless of scale keeps the stream aligned.
            let z: f64 = unit.sample(&mut rng);
            let std = sigma * scale;
            if std > 0.0 {
                out.matrix[i * data.n_features + j] += std * z;
            }
        }
    }
    Ok(out)
}

/// A cluster request for [`synthetic_blobs`]: Gaussian cloud around a center,
/// labeled with one class.
#[derive(Debug, Clone)]
pub struct Blob {
    pub center: Vec<f64>,
    pub count: usize,
    pub class: usize,
}

/// Samples Gaussian clusters into a dataset. Small helper for building
/// synthetic benchmark data in tests and examples.
pub fn synthetic_blobs(blobs: &[Blob], spread: f64, n_classes: usize, seed: u64) -> Result<Dataset> {
    let p = blobs
        .first()
        .map(|b| b.center.len())
        .ok_or_else(|| Error::Config("synthetic_blobs needs at least one blob".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, spread).map_err(|e| Error::Config(format!("bad spread: {e}")))?;
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for blob in blobs {
        if blob.center.len() != p {
            return Err(Error::Config("all blob centers must share a dimension".into()));
        }
        for _ in 0..blob.count {
            let row: Vec<f64> = blob.center.iter().map(|c| c + noise.sample(&mut rng)).collect();
            rows.push(row);
            labels.push(blob.class);
        }
    }
    Dataset::from_parts(rows, labels, n_classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp_csv(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn load_csv_parses_header_and_rows() {
        let f = write_temp_csv("a,b,cls\n1,2,x\n3,4,y\n5,6,x\n7,8,y\n");
        let raw = load_csv(f.path(), "cls").unwrap();
        assert_eq!(raw.columns, vec!["a", "b", "cls"]);
        assert_eq!(raw.rows.len(), 4);
        assert_eq!(raw.target, "cls");
    }

    #[test]
    fn load_csv_missing_target_errors() {
        let f = write_temp_csv("a,b\n1,2\n3,4\n");
        let err = load_csv(f.path(), "cls").unwrap_err();
        assert!(err.to_string().contains("target column not found"), "{err}");
    }

    #[test]
    fn load_csv_header_only_errors() {
        let f = write_temp_csv("a,b,cls\n");
        let err = load_csv(f.path(), "cls").unwrap_err();
        assert!(err.to_string().contains("empty table"), "{err}");
    }

    #[test]
    fn load_csv_ragged_rows_error() {
        let f = write_temp_csv("a,b,cls\n1,2,x\n3,4\n");
        let err = load_csv(f.path(), "cls").unwrap_err();
        assert!(err.to_string().contains("ragged"), "{err}");
    }

    #[test]
    fn load_csv_missing_file_errors() {
        let err = load_csv("/nonexistent/nope.csv", "cls").unwrap_err();
        assert!(err.to_string().contains("cannot open"), "{err}");
    }

    #[test]
    fn encode_one_hot_orders_categories_lexicographically() {
        let raw = RawTable::new(
            vec!["color".into(), "cls".into()],
            vec![
                vec!["red".into(), "a".into()],
                vec!["blue".into(), "b".into()],
                vec!["red".into(), "a".into()],
            ],
            "cls",
        )
        .unwrap();
        let data = encode(&raw).unwrap();
        let names = data.schema().feature_names();
        assert_eq!(names, vec!["color=blue", "color=red"]);
        assert_eq!(data.row(0), &[0.0, 1.0]);
        assert_eq!(data.row(1), &[1.0, 0.0]);
        assert_eq!(data.row(2), &[0.0, 1.0]);
    }

    #[test]
    fn encode_numeric_passthrough_and_label_mapping() {
        let raw = RawTable::new(
            vec!["v".into(), "cls".into()],
            vec![
                vec!["1.5".into(), "B".into()],
                vec!["2.5".into(), "A".into()],
                vec!["3.5".into(), "C".into()],
            ],
            "cls",
        )
        .unwrap();
        let data = encode(&raw).unwrap();
        assert_eq!(data.schema().classes, vec!["A", "B", "C"]);
        // Labels follow lexicographic class order: B->1, A->0, C->2.
        assert_eq!(data.labels(), &[1, 0, 2]);
        assert_eq!(data.value(0, 0), 1.5);
        assert_eq!(data.class_counts(), &[1, 1, 1]);
    }

    #[test]
    fn encode_mixed_column_errors() {
        let raw = RawTable::new(
            vec!["v".into(), "cls".into()],
            vec![
                vec!["1.5".into(), "a".into()],
                vec!["oops".into(), "b".into()],
                vec!["3.5".into(), "a".into()],
            ],
            "cls",
        )
        .unwrap();
        let err = encode(&raw).unwrap_err();
        assert!(err.to_string().contains("mixed column"), "{err}");
    }

    #[test]
    fn encode_is_deterministic() {
        let raw = RawTable::new(
            vec!["c".into(), "v".into(), "cls".into()],
            vec![
                vec!["x".into(), "1".into(), "a".into()],
                vec!["y".into(), "2".into(), "b".into()],
                vec!["z".into(), "3".into(), "a".into()],
            ],
            "cls",
        )
        .unwrap();
        let d1 = encode(&raw).unwrap();
        let d2 = encode(&raw).unwrap();
        assert_eq!(d1.matrix, d2.matrix);
        assert_eq!(d1.labels, d2.labels);
        assert_eq!(d1.schema.feature_names(), d2.schema.feature_names());
    }

    #[test]
    fn encode_class_counts_match_raw_tallies() {
        let raw = RawTable::new(
            vec!["v".into(), "cls".into()],
            vec![
                vec!["1".into(), "b".into()],
                vec!["2".into(), "a".into()],
                vec!["3".into(), "b".into()],
                vec!["4".into(), "b".into()],
            ],
            "cls",
        )
        .unwrap();
        let data = encode(&raw).unwrap();
        assert_eq!(data.class_counts(), &[1, 3]);
    }

    #[test]
    fn split_unstratified_floor_contract() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let labels = vec![0, 1, 0, 1, 0, 1, 0, 1, 0, 1];
        let data = Dataset::from_parts(rows, labels, 2).unwrap();
        let (train, test) = split(&data, 0.7, 42, false).unwrap();
        assert_eq!(train.n_rows(), 7);
        assert_eq!(test.n_rows(), 3);
    }

    #[test]
    fn split_is_deterministic_per_seed() {
        let rows: Vec<Vec<f64>> = (0..50).map(|i| vec![i as f64]).collect();
        let labels: Vec<usize> = (0..50).map(|i| i % 3).collect();
        let data = Dataset::from_parts(rows, labels, 3).unwrap();
        let a = split_indices(&data, 0.6, 7, true).unwrap();
        let b = split_indices(&data, 0.6, 7, true).unwrap();
        assert_eq!(a, b);
        let c = split_indices(&data, 0.6, 8, true).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn split_partition_covers_everything() {
        let rows: Vec<Vec<f64>> = (0..37).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let labels: Vec<usize> = (0..37).map(|i| usize::from(i % 5 == 0)).collect();
        let data = Dataset::from_parts(rows, labels, 2).unwrap();
        for stratified in [false, true] {
            let (train, test) = split_indices(&data, 0.7, 3, stratified).unwrap();
            let mut all: Vec<usize> = train.iter().chain(test.iter()).copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..37).collect::<Vec<_>>());
        }
    }

    #[test]
    fn split_stratified_per_class_floors() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..90 {
            rows.push(vec![i as f64]);
            labels.push(0);
        }
        for i in 0..10 {
            rows.push(vec![1000.0 + i as f64]);
            labels.push(1);
        }
        let data = Dataset::from_parts(rows, labels, 2).unwrap();
        let (train, _test) = split(&data, 0.7, 0, true).unwrap();
        let majority = train.labels().iter().filter(|&&y| y == 0).count();
        let minority = train.labels().iter().filter(|&&y| y == 1).count();
        assert_eq!(majority, 63);
        assert_eq!(minority, 7);
    }

    #[test]
    fn split_stratified_singleton_class_errors() {
        let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64]).collect();
        let labels = vec![0, 0, 0, 0, 1];
        let data = Dataset::from_parts(rows, labels, 2).unwrap();
        let err = split(&data, 0.7, 0, true).unwrap_err();
        assert!(err.to_string().contains("single sample"), "{err}");
        assert!(err.to_string().contains('1'), "{err}");
    }

    #[test]
    fn split_bad_fraction_errors() {
        let data = Dataset::from_parts(vec![vec![0.0], vec![1.0]], vec![0, 1], 2).unwrap();
        assert!(split(&data, 0.0, 0, false).is_err());
        assert!(split(&data, 1.0, 0, false).is_err());
        assert!(split(&data, 1.7, 0, false).is_err());
    }

    #[test]
    fn perturb_sigma_zero_is_identity() {
        let rows = vec![vec![1.0, -2.0], vec![3.5, 0.0]];
        let data = Dataset::from_parts(rows, vec![0, 1], 2).unwrap();
        let out = perturb(&data, 0.0, &[1.0, 1.0], 99).unwrap();
        assert_eq!(out.matrix, data.matrix);
    }

    #[test]
    fn perturb_zero_scale_column_unchanged() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![5.0, i as f64]).collect();
        let labels: Vec<usize> = (0..20).map(|i| i % 2).collect();
        let data = Dataset::from_parts(rows, labels, 2).unwrap();
        let out = perturb(&data, 0.3, &[0.0, 1.0], 5).unwrap();
        for i in 0..20 {
            assert_eq!(out.value(i, 0), 5.0);
            assert_ne!(out.value(i, 1), data.value(i, 1));
        }
        assert_eq!(out.labels(), data.labels());
    }

    #[test]
    fn perturb_scale_length_mismatch_errors() {
        let data = Dataset::from_parts(vec![vec![0.0, 1.0], vec![1.0, 2.0]], vec![0, 1], 2).unwrap();
        assert!(perturb(&data, 0.1, &[1.0], 0).is_err());
    }

    #[test]
    fn perturb_noise_magnitude_matches_sigma() {
        // 10,000 draws at sigma 0.1 on a unit-scale column: the empirical
        // std of (perturbed - original) lands within [0.095, 0.105].
        let n = 10_000;
        let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![(i % 100) as f64 / 100.0]).collect();
        let labels: Vec<usize> = (0..n).map(|i| i % 2).collect();
        let data = Dataset::from_parts(rows, labels, 2).unwrap();
        let out = perturb(&data, 0.1, &[1.0], 2024).unwrap();
        let diffs: Vec<f64> = (0..n).map(|i| out.value(i, 0) - data.value(i, 0)).collect();
        let mean = diffs.iter().sum::<f64>() / n as f64;
        let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n as f64;
        let std = var.sqrt();
        assert!((0.095..=0.105).contains(&std), "empirical std {std}");
    }

    #[test]
    fn feature_stds_constant_column_is_zero() {
        let rows = vec![vec![2.0, 1.0], vec![2.0, 3.0], vec![2.0, 5.0]];
        let data = Dataset::from_parts(rows, vec![0, 1, 0], 2).unwrap();
        let stds = data.feature_stds();
        assert_eq!(stds[0], 0.0);
        assert!(stds[1] > 0.0);
    }

    #[test]
    fn write_csv_round_trips_through_encode() {
        let raw = RawTable::new(
            vec!["color".into(), "v".into(), "cls".into()],
            vec![
                vec!["red".into(), "1".into(), "a".into()],
                vec!["blue".into(), "2".into(), "b".into()],
            ],
            "cls",
        )
        .unwrap();
        let data = encode(&raw).unwrap();
        let mut buf = Vec::new();
        data.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("color=blue,color=red,v,cls\n"), "{text}");
        assert!(text.contains("0,1,1,a"), "{text}");
    }
}
