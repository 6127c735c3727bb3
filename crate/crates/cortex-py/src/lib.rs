//! Python bindings: datasets, cost matrices, the two tree learners, rule
//! sets, the six metrics, and the statistics, exposed as a `cortex_py`
//! module. The experiment harness is reachable through a JSON config,
//! mirroring the CLI.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use cortex_core::blackbox::PredictorSource;
use cortex_core::cost::CostMatrix as CoreCostMatrix;
use cortex_core::dataset::{self, Dataset as CoreDataset};
use cortex_core::error::Error;
use cortex_core::experiment::{self, RunConfig};
use cortex_core::metrics;
use cortex_core::rules::{self, RuleSet as CoreRuleSet};
use cortex_core::stats::{self, Direction, RankTable};
use cortex_core::tree::{baseline, cortex, Tree as CoreTree, TreeParams};

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::Config(_) | Error::Data(_) => PyValueError::new_err(err.to_string()),
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

fn direction(higher_better: bool) -> Direction {
    if higher_better {
        Direction::HigherBetter
    } else {
        Direction::LowerBetter
    }
}

/// Encoded feature table with class labels.
#[pyclass(name = "Dataset", skip_from_py_object)]
#[derive(Clone)]
struct PyDataset {
    inner: CoreDataset,
}

#[pymethods]
impl PyDataset {
    /// Loads a CSV and one-hot encodes categorical columns.
    #[staticmethod]
    fn load_csv(path: &str, target: &str) -> PyResult<Self> {
        let raw = dataset::load_csv(path, target).map_err(to_py_err)?;
        let inner = dataset::encode(&raw).map_err(to_py_err)?;
        Ok(PyDataset { inner })
    }

    /// Builds a dataset from numeric rows and class indices.
    #[staticmethod]
    fn from_arrays(rows: Vec<Vec<f64>>, labels: Vec<usize>, n_classes: usize) -> PyResult<Self> {
        Ok(PyDataset {
            inner: CoreDataset::from_parts(rows, labels, n_classes).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn n_rows(&self) -> usize {
        self.inner.n_rows()
    }

    #[getter]
    fn n_features(&self) -> usize {
        self.inner.n_features()
    }

    #[getter]
    fn n_classes(&self) -> usize {
        self.inner.n_classes()
    }

    #[getter]
    fn class_names(&self) -> Vec<String> {
        self.inner.schema().classes.clone()
    }

    #[getter]
    fn feature_names(&self) -> Vec<String> {
        self.inner.schema().feature_names()
    }

    fn labels(&self) -> Vec<usize> {
        self.inner.labels().to_vec()
    }

    fn class_counts(&self) -> Vec<usize> {
        self.inner.class_counts().to_vec()
    }

    fn row(&self, i: usize) -> PyResult<Vec<f64>> {
        if i >= self.inner.n_rows() {
            return Err(PyValueError::new_err(format!("row {i} out of range")));
        }
        Ok(self.inner.row(i).to_vec())
    }

    fn feature_stds(&self) -> Vec<f64> {
        self.inner.feature_stds()
    }

    /// Replaces labels (e.g. with black-box predictions).
    fn with_labels(&self, labels: Vec<usize>) -> PyResult<Self> {
        Ok(PyDataset {
            inner: self.inner.with_labels(labels).map_err(to_py_err)?,
        })
    }

    /// Deterministic train/test split.
    #[pyo3(signature = (train_fraction, seed, stratified=true))]
    fn split(&self, train_fraction: f64, seed: u64, stratified: bool) -> PyResult<(Self, Self)> {
        let (a, b) =
            dataset::split(&self.inner, train_fraction, seed, stratified).map_err(to_py_err)?;
        Ok((PyDataset { inner: a }, PyDataset { inner: b }))
    }

    /// Adds per-feature-scaled Gaussian noise.
    fn perturb(&self, sigma: f64, feature_scales: Vec<f64>, seed: u64) -> PyResult<Self> {
        Ok(PyDataset {
            inner: dataset::perturb(&self.inner, sigma, &feature_scales, seed)
                .map_err(to_py_err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.n_rows()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset({} rows, {} features, {} classes)",
            self.inner.n_rows(),
            self.inner.n_features(),
            self.inner.n_classes()
        )
    }
}

/// K×K class-dependent cost matrix; entry [i][j] is the cost of predicting
/// class j when the actual class is i.
#[pyclass(name = "CostMatrix", skip_from_py_object)]
#[derive(Clone)]
struct PyCostMatrix {
    inner: CoreCostMatrix,
}

#[pymethods]
impl PyCostMatrix {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(PyCostMatrix {
            inner: CoreCostMatrix::new(rows).map_err(to_py_err)?,
        })
    }

    /// Default matrix from class counts: C[i][j] = (N_i + N_j) / N_i off the
    /// diagonal, 0 on it.
    #[staticmethod]
    fn default_from_counts(counts: Vec<usize>) -> PyResult<Self> {
        Ok(PyCostMatrix {
            inner: CoreCostMatrix::default_from_counts(&counts).map_err(to_py_err)?,
        })
    }

    /// 0/1 matrix (majority-vote behavior).
    #[staticmethod]
    fn unit(k: usize) -> PyResult<Self> {
        Ok(PyCostMatrix {
            inner: CoreCostMatrix::unit(k).map_err(to_py_err)?,
        })
    }

    /// Loads a headerless K×K CSV, rejecting unreasonable matrices.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyCostMatrix {
            inner: CoreCostMatrix::load(path).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn n_classes(&self) -> usize {
        self.inner.n_classes()
    }

    fn cost(&self, actual: usize, predicted: usize) -> PyResult<f64> {
        let k = self.inner.n_classes();
        if actual >= k || predicted >= k {
            return Err(PyValueError::new_err("class index out of range"));
        }
        Ok(self.inner.cost(actual, predicted))
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.inner.rows().to_vec()
    }

    /// Returns (is_valid, hard_violations, warnings).
    fn validate(&self) -> (bool, Vec<(usize, usize)>, Vec<String>) {
        let report = self.inner.validate();
        (report.is_valid(), report.hard_violations.clone(), report.warnings())
    }

    fn __repr__(&self) -> String {
        format!("CostMatrix({}x{0})", self.inner.n_classes())
    }
}

fn tree_params(max_depth: usize, min_samples_leaf: usize, min_gain: f64) -> TreeParams {
    TreeParams {
        max_depth,
        min_samples_leaf,
        min_gain,
        max_thresholds_per_feature: None,
    }
}

/// A fitted decision tree (either method).
#[pyclass(name = "Tree")]
struct PyTree {
    inner: CoreTree,
}

#[pymethods]
impl PyTree {
    /// Fits the cost-sensitive tree.
    #[staticmethod]
    #[pyo3(signature = (data, matrix, max_depth=20, min_samples_leaf=1, min_gain=1e-12))]
    fn fit_cortex(
        data: &PyDataset,
        matrix: &PyCostMatrix,
        max_depth: usize,
        min_samples_leaf: usize,
        min_gain: f64,
    ) -> PyResult<Self> {
        let params = tree_params(max_depth, min_samples_leaf, min_gain);
        Ok(PyTree {
            inner: cortex::fit(&data.inner, &matrix.inner, &params).map_err(to_py_err)?,
        })
    }

    /// Fits the class-weighted Gini baseline.
    #[staticmethod]
    #[pyo3(signature = (data, max_depth=20, min_samples_leaf=1, min_gain=1e-12))]
    fn fit_weighted(
        data: &PyDataset,
        max_depth: usize,
        min_samples_leaf: usize,
        min_gain: f64,
    ) -> PyResult<Self> {
        let params = tree_params(max_depth, min_samples_leaf, min_gain);
        Ok(PyTree {
            inner: baseline::fit_weighted(&data.inner, &params).map_err(to_py_err)?,
        })
    }

    /// Routes one feature vector; returns (class_index, probabilities).
    fn predict(&self, x: Vec<f64>) -> PyResult<(usize, Vec<f64>)> {
        let (label, probs) = self.inner.predict(&x).map_err(to_py_err)?;
        Ok((label, probs.to_vec()))
    }

    fn predict_labels(&self, data: &PyDataset) -> PyResult<Vec<usize>> {
        self.inner.predict_labels(&data.inner).map_err(to_py_err)
    }

    #[getter]
    fn n_leaves(&self) -> usize {
        self.inner.n_leaves()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    #[getter]
    fn method(&self) -> String {
        self.inner.method().name().to_string()
    }

    /// Plain-text rendering, one node per line.
    fn render(&self) -> String {
        self.inner.render()
    }

    fn __repr__(&self) -> String {
        format!(
            "Tree(method={}, depth={}, leaves={})",
            self.inner.method().name(),
            self.inner.depth(),
            self.inner.n_leaves()
        )
    }
}

/// An ordered IF-THEN rule set extracted from a tree.
#[pyclass(name = "RuleSet")]
struct PyRuleSet {
    inner: CoreRuleSet,
}

#[pymethods]
impl PyRuleSet {
    /// One rule per leaf, depth-first, antecedents simplified.
    #[staticmethod]
    fn extract(tree: &PyTree) -> PyResult<Self> {
        Ok(PyRuleSet {
            inner: rules::extract(&tree.inner).map_err(to_py_err)?,
        })
    }

    /// Class index of the first firing rule, or None.
    fn apply(&self, x: Vec<f64>) -> PyResult<Option<usize>> {
        self.inner.apply(&x).map_err(to_py_err)
    }

    /// (number of rules, average simplified antecedent count).
    fn size_metrics(&self) -> PyResult<(usize, f64)> {
        self.inner.size_metrics().map_err(to_py_err)
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py_err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("RuleSet({} rules)", self.inner.len())
    }
}

/// Cost of labeling a node with class k: sum_i counts[i] * C[i][k].
#[pyfunction]
fn node_cost(counts: Vec<usize>, matrix: &PyCostMatrix, k: usize) -> PyResult<f64> {
    if counts.len() != matrix.inner.n_classes() || k >= matrix.inner.n_classes() {
        return Err(PyValueError::new_err("counts/matrix shape mismatch"));
    }
    Ok(cortex::node_cost(&counts, &matrix.inner, k))
}

/// Least costly class and its cost; ties break to the lowest index.
#[pyfunction]
fn label_node(counts: Vec<usize>, matrix: &PyCostMatrix) -> PyResult<(usize, f64)> {
    cortex::label_node(&counts, &matrix.inner).map_err(to_py_err)
}

/// Cost-sensitive class probabilities; argmax agrees with label_node.
#[pyfunction]
fn soft_probabilities(counts: Vec<usize>, matrix: &PyCostMatrix) -> PyResult<Vec<f64>> {
    cortex::soft_probabilities(&counts, &matrix.inner).map_err(to_py_err)
}

/// Balanced class weights n / (K * N_i).
#[pyfunction]
fn class_weights(counts: Vec<usize>) -> PyResult<Vec<f64>> {
    baseline::class_weights(&counts).map_err(to_py_err)
}

#[pyfunction]
fn completeness(rules: &PyRuleSet, data: &PyDataset) -> PyResult<f64> {
    metrics::completeness(&rules.inner, &data.inner).map_err(to_py_err)
}

#[pyfunction]
fn correctness(rules: &PyRuleSet, data: &PyDataset) -> PyResult<f64> {
    metrics::correctness(&rules.inner, &data.inner).map_err(to_py_err)
}

#[pyfunction]
fn fidelity(rules: &PyRuleSet, data: &PyDataset, blackbox: Vec<usize>) -> PyResult<f64> {
    metrics::fidelity(&rules.inner, &data.inner, &blackbox).map_err(to_py_err)
}

#[pyfunction]
fn robustness(
    rules: &PyRuleSet,
    data: &PyDataset,
    sigma: f64,
    feature_scales: Vec<f64>,
    seed: u64,
) -> PyResult<f64> {
    metrics::robustness(&rules.inner, &data.inner, sigma, &feature_scales, seed)
        .map_err(to_py_err)
}

/// Two-sided Wilcoxon signed-rank test; returns (statistic, p_value, reject).
#[pyfunction]
#[pyo3(signature = (a, b, alpha=0.05))]
fn wilcoxon(a: Vec<f64>, b: Vec<f64>, alpha: f64) -> PyResult<(f64, f64, bool)> {
    let test = stats::wilcoxon(&a, &b, alpha).map_err(to_py_err)?;
    Ok((test.statistic, test.p_value, test.reject))
}

/// Friedman test over blocks x methods values; returns
/// (statistic, p_value, reject).
#[pyfunction]
#[pyo3(signature = (values, higher_better=true, alpha=0.05))]
fn friedman(values: Vec<Vec<f64>>, higher_better: bool, alpha: f64) -> PyResult<(f64, f64, bool)> {
    let k = values.first().map(|r| r.len()).unwrap_or(0);
    let methods = (0..k).map(|i| format!("m{i}")).collect();
    let table = RankTable::new(methods, values, direction(higher_better)).map_err(to_py_err)?;
    let test = stats::friedman(&table, alpha).map_err(to_py_err)?;
    Ok((test.statistic, test.p_value, test.reject))
}

/// Normalized rank sums in [0,1] per method (0 = best possible).
#[pyfunction]
#[pyo3(signature = (per_method, higher_better=true))]
fn rank_and_normalize(per_method: Vec<Vec<f64>>, higher_better: bool) -> PyResult<Vec<f64>> {
    stats::rank_and_normalize(&per_method, direction(higher_better)).map_err(to_py_err)
}

/// Black-box predictions for a dataset from a prediction file.
#[pyfunction]
fn predictions_from_file(path: &str, label_column: &str, data: &PyDataset) -> PyResult<Vec<usize>> {
    let source = PredictorSource::PredictionFile {
        path: path.into(),
        label_column: label_column.to_string(),
    };
    cortex_core::blackbox::get_predictions(&source, &data.inner).map_err(to_py_err)
}

/// Black-box predictions from a subprocess oracle command.
#[pyfunction]
#[pyo3(signature = (command, data, timeout_secs=120))]
fn predictions_from_command(command: &str, data: &PyDataset, timeout_secs: u64) -> PyResult<Vec<usize>> {
    let source = PredictorSource::SubprocessOracle {
        command: command.to_string(),
        workdir: None,
        timeout_secs,
    };
    cortex_core::blackbox::get_predictions(&source, &data.inner).map_err(to_py_err)
}

/// Runs the full experiment from a JSON config (the CLI's config format)
/// and returns the report as a JSON string.
#[pyfunction]
fn run_experiment_json(config_json: &str) -> PyResult<String> {
    let config = RunConfig::from_json(config_json).map_err(to_py_err)?;
    let report = experiment::run_experiment(&config).map_err(to_py_err)?;
    report.to_json().map_err(to_py_err)
}

/// Runs the experiment and writes the configured report files; returns the
/// written paths.
#[pyfunction]
fn run_and_render_json(config_json: &str) -> PyResult<Vec<String>> {
    let config = RunConfig::from_json(config_json).map_err(to_py_err)?;
    let (_, written) = experiment::run_and_render(&config).map_err(to_py_err)?;
    Ok(written
        .into_iter()
        .map(|p| p.to_string_lossy().into_owned())
        .collect())
}

#[pymodule]
fn cortex_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDataset>()?;
    m.add_class::<PyCostMatrix>()?;
    m.add_class::<PyTree>()?;
    m.add_class::<PyRuleSet>()?;
    m.add_function(wrap_pyfunction!(node_cost, m)?)?;
    m.add_function(wrap_pyfunction!(label_node, m)?)?;
    m.add_function(wrap_pyfunction!(soft_probabilities, m)?)?;
    m.add_function(wrap_pyfunction!(class_weights, m)?)?;
    m.add_function(wrap_pyfunction!(completeness, m)?)?;
    m.add_function(wrap_pyfunction!(correctness, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(robustness, m)?)?;
    m.add_function(wrap_pyfunction!(wilcoxon, m)?)?;
    m.add_function(wrap_pyfunction!(friedman, m)?)?;
    m.add_function(wrap_pyfunction!(rank_and_normalize, m)?)?;
    m.add_function(wrap_pyfunction!(predictions_from_file, m)?)?;
    m.add_function(wrap_pyfunction!(predictions_from_command, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment_json, m)?)?;
    m.add_function(wrap_pyfunction!(run_and_render_json, m)?)?;
    Ok(())
}
