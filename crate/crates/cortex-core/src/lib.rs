//! Cost-sensitive decision trees with IF-THEN rule extraction and an
//! evaluation harness for surrogate explanations.
//!
//! The library fits two tree-based surrogates to a black-box model's
//! predictions: a multi-class cost-sensitive tree whose splits and leaf
//! labels minimize misclassification cost under a class-dependent K×K cost
//! matrix, and a class-weighted Gini baseline. Fitted trees convert to rule
//! sets (one rule per leaf), which are scored with six explainability
//! metrics — completeness, correctness, fidelity, robustness, number of
//! rules, and average rule length — across repeated randomized splits, and
//! methods are compared with Friedman and Wilcoxon signed-rank tests plus
//! normalized rank aggregation.
//!
//! Cost matrix convention, worth stating once and prominently: `C[i][j]` is
//! the cost of predicting class `j` when the actual class is `i` (row =
//! actual, column = predicted). The default matrix built from class counts
//! is `C[i][j] = (N_i + N_j) / N_i` off the diagonal and zero on it, so
//! misclassifying rare classes is expensive.

pub mod blackbox;
pub mod cost;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod rules;
pub mod stats;
pub mod tree;

pub use blackbox::{get_predictions, PredictorSource};
pub use cost::{CostMatrix, ValidationReport};
pub use dataset::{encode, load_csv, perturb, split, Dataset, FeatureSchema, RawTable};
pub use error::{Error, Result};
pub use experiment::{
    run_and_render, run_experiment, render_report, EvaluationReport, Method, ReportFormat,
    RunConfig,
};
pub use metrics::{completeness, correctness, fidelity, robustness, MetricRecord};
pub use rules::{extract, Antecedent, Rule, RuleSet};
pub use stats::{friedman, rank_and_normalize, wilcoxon, Direction, RankTable};
pub use tree::{baseline::fit_weighted, cortex, Tree, TreeMethod, TreeParams};
