//! Binary decision trees over numeric features.
//!
//! Both tree learners in this crate share one induction engine: recursive
//! top-down greedy search over axis-aligned threshold splits, where a
//! criterion assigns each node a nonnegative value and a split's gain is the
//! parent value minus the summed child values. The cost-sensitive learner
//! plugs in misclassification cost ([`cortex`]), the baseline plugs in
//! weighted Gini mass ([`baseline`]), so comparisons between the two isolate
//! the criterion as the only difference.

pub mod baseline;
pub mod cortex;

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cost::CostMatrix;
use crate::dataset::{Dataset, FeatureSchema};
use crate::error::{Error, Result};

/// Axis-aligned test: `x[feature] <= threshold` goes left, otherwise right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitRule {
    pub feature: usize,
    pub threshold: f64,
}

/// Tree node: internal split or a leaf with class counts, the assigned
/// label, and a class-probability vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Node {
    Internal {
        split: SplitRule,
        left: Box<Node>,
        right: Box<Node>,
    },
    Leaf {
        counts: Vec<usize>,
        label: usize,
        probabilities: Vec<f64>,
    },
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf { .. })
    }

    fn n_leaves(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Internal { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

/// Induction hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    /// Maximum root-to-leaf path length; 0 means a single leaf.
    pub max_depth: usize,
    /// Minimum samples on each side of every split.
    pub min_samples_leaf: usize,
    /// A split must improve the criterion by strictly more than this.
    /// Strictly positive so zero-gain splits cannot recurse forever.
    pub min_gain: f64,
    /// Optional cap on candidate thresholds per feature; `None` enumerates
    /// every midpoint between consecutive distinct values.
    pub max_thresholds_per_feature: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: 20,
            min_samples_leaf: 1,
            min_gain: 1e-12,
            max_thresholds_per_feature: None,
        }
    }
}

impl TreeParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_samples_leaf == 0 {
            return Err(Error::Config("min_samples_leaf must be >= 1".into()));
        }
        if self.min_gain <= 0.0 || !self.min_gain.is_finite() {
            return Err(Error::Config(format!(
                "min_gain must be finite and > 0, got {}",
                self.min_gain
            )));
        }
        if self.max_thresholds_per_feature == Some(0) {
            return Err(Error::Config("max_thresholds_per_feature must be >= 1".into()));
        }
        Ok(())
    }
}

/// Which criterion produced a tree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum TreeMethod {
    /// Cost-minimizing splits and least-costly-class leaves.
    Cortex { cost_matrix: CostMatrix },
    /// Weighted-Gini splits with class weights inversely proportional to
    /// class frequencies.
    WeightedGini { weights: Vec<f64> },
}

impl TreeMethod {
    pub fn name(&self) -> &'static str {
        match self {
            TreeMethod::Cortex { .. } => "cortex",
            TreeMethod::WeightedGini { .. } => "dt",
        }
    }
}

/// A fitted tree. Immutable; safe to share across threads for prediction.
#[derive(Debug, Clone)]
pub struct Tree {
    root: Node,
    schema: Arc<FeatureSchema>,
    params: TreeParams,
    method: TreeMethod,
}

impl Tree {
    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn schema(&self) -> &Arc<FeatureSchema> {
        &self.schema
    }

    pub fn params(&self) -> &TreeParams {
        &self.params
    }

    pub fn method(&self) -> &TreeMethod {
        &self.method
    }

    pub fn n_leaves(&self) -> usize {
        self.root.n_leaves()
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    /// Routes a feature vector to its leaf and returns the leaf's label and
    /// probability vector. Total for finite input: every vector reaches
    /// exactly one leaf.
    pub fn predict(&self, x: &[f64]) -> Result<(usize, &[f64])> {
        if x.len() != self.schema.n_features() {
            return Err(Error::Data(format!(
                "feature vector has length {}, tree expects {}",
                x.len(),
                self.schema.n_features()
            )));
        }
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf {
                    label,
                    probabilities,
                    ..
                } => return Ok((*label, probabilities)),
                Node::Internal { split, left, right } => {
                    node = if x[split.feature] <= split.threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    /// Label-only prediction for every row of a dataset.
    pub fn predict_labels(&self, data: &Dataset) -> Result<Vec<usize>> {
        data.rows().map(|row| self.predict(row).map(|(y, _)| y)).collect()
    }

    /// Plain-text rendering: one node per line, two-space indentation per
    /// depth, internal lines `feature_name <= threshold`, leaf lines
    /// `class=<name> counts=[...] p=[...]`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_node(&self.root, 0, &mut out);
        out
    }

    /// Splits and leaf labels only, no counts or probabilities. Two trees
    /// with the same feature tests and labels render identically here even
    /// when their leaf payloads differ.
    pub fn render_structure(&self) -> String {
        let mut out = String::new();
        self.render_structure_node(&self.root, 0, &mut out);
        out
    }

    fn render_structure_node(&self, node: &Node, depth: usize, out: &mut String) {
        let indent = "  ".repeat(depth);
        match node {
            Node::Internal { split, left, right } => {
                let name = &self.schema.features[split.feature].name;
                let _ = writeln!(out, "{indent}{name} <= {}", split.threshold);
                self.render_structure_node(left, depth + 1, out);
                self.render_structure_node(right, depth + 1, out);
            }
            Node::Leaf { label, .. } => {
                let _ = writeln!(out, "{indent}class={}", self.schema.classes[*label]);
            }
        }
    }

    fn render_node(&self, node: &Node, depth: usize, out: &mut String) {
        let indent = "  ".repeat(depth);
        match node {
            Node::Internal { split, left, right } => {
                let name = &self.schema.features[split.feature].name;
                let _ = writeln!(out, "{indent}{name} <= {}", split.threshold);
                self.render_node(left, depth + 1, out);
                self.render_node(right, depth + 1, out);
            }
            Node::Leaf {
                counts,
                label,
                probabilities,
            } => {
                let class = &self.schema.classes[*label];
                let counts_s: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
                let probs_s: Vec<String> = probabilities.iter().map(|p| p.to_string()).collect();
                let _ = writeln!(
                    out,
                    "{indent}class={class} counts=[{}] p=[{}]",
                    counts_s.join(", "),
                    probs_s.join(", ")
                );
            }
        }
    }
}

/// Node-value function plugged into the shared induction engine. The engine
/// minimizes the value: a split's gain is `parent - (left + right)`.
pub(crate) trait SplitCriterion {
    /// Nonnegative value of a node with these class counts.
    fn node_value(&self, counts: &[usize]) -> f64;
    /// Leaf payload for these counts: assigned label and probabilities.
    fn leaf(&self, counts: &[usize]) -> (usize, Vec<f64>);
}

pub(crate) fn count_classes(data: &Dataset, indices: &[usize]) -> Vec<usize> {
    let mut counts = vec![0usize; data.n_classes()];
    for &i in indices {
        counts[data.labels()[i]] += 1;
    }
    counts
}

fn is_pure(counts: &[usize]) -> bool {
    counts.iter().filter(|&&c| c > 0).count() <= 1
}

/// Best split of the node under a criterion.
///
/// Candidates are midpoints between consecutive distinct sorted values of
/// each feature (optionally capped at equally spaced quantile positions).
/// Ties on gain resolve to the lowest feature index, then lowest threshold.
/// Returns `None` when no candidate clears `min_gain` with both children
/// holding at least `min_samples_leaf` samples.
pub(crate) fn best_split_with<C: SplitCriterion>(
    data: &Dataset,
    indices: &[usize],
    criterion: &C,
    params: &TreeParams,
) -> Option<(SplitRule, f64)> {
    let n = indices.len();
    if n < 2 {
        return None;
    }
    let node_counts = count_classes(data, indices);
    let parent_value = criterion.node_value(&node_counts);
    let k = node_counts.len();

    let mut best: Option<(SplitRule, f64)> = None;
    let mut pairs: Vec<(f64, usize)> = Vec::with_capacity(n);
    for feature in 0..data.n_features() {
        pairs.clear();
        pairs.extend(
            indices
                .iter()
                .map(|&i| (data.value(i, feature), data.labels()[i])),
        );
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

        // Boundary positions t where value(t) < value(t+1).
        let boundaries: Vec<usize> = (0..n - 1)
            .filter(|&t| pairs[t].0 < pairs[t + 1].0)
            .collect();
        if boundaries.is_empty() {
            continue;
        }
        let selected: Vec<usize> = match params.max_thresholds_per_feature {
            Some(q) if boundaries.len() > q => {
                // Equally spaced positions across the boundary list.
                let mut picks: Vec<usize> = (0..q)
                    .map(|i| boundaries[i * boundaries.len() / q])
                    .collect();
                picks.dedup();
                picks
            }
            _ => boundaries,
        };

        let mut left_counts = vec![0usize; k];
        let mut cursor = 0;
        for &t in &selected {
            while cursor <= t {
                left_counts[pairs[cursor].1] += 1;
                cursor += 1;
            }
            let left_n = t + 1;
            let right_n = n - left_n;
            if left_n < params.min_samples_leaf || right_n < params.min_samples_leaf {
                continue;
            }
            let right_counts: Vec<usize> = node_counts
                .iter()
                .zip(left_counts.iter())
                .map(|(total, l)| total - l)
                .collect();
            let gain =
                parent_value - criterion.node_value(&left_counts) - criterion.node_value(&right_counts);
            if gain <= params.min_gain {
                continue;
            }
            if best.as_ref().is_none_or(|(_, g)| gain > *g) {
                let lo = pairs[t].0;
                let hi = pairs[t + 1].0;
                let mid = lo + (hi - lo) / 2.0;
                // Midpoint can round onto the upper value for adjacent
                // floats; fall back to the lower value so `<=` still sends
                // exactly the left block left.
                let threshold = if mid > lo && mid < hi { mid } else { lo };
                best = Some((SplitRule { feature, threshold }, gain));
            }
        }
    }
    best
}

/// Shared recursive induction used by both learners.
pub(crate) fn fit_with<C: SplitCriterion>(
    data: &Dataset,
    criterion: &C,
    params: &TreeParams,
) -> Result<Node> {
    params.validate()?;
    let indices: Vec<usize> = (0..data.n_rows()).collect();
    Ok(build_node(data, &indices, criterion, params, 0))
}

fn build_node<C: SplitCriterion>(
    data: &Dataset,
    indices: &[usize],
    criterion: &C,
    params: &TreeParams,
    depth: usize,
) -> Node {
    let counts = count_classes(data, indices);
    let make_leaf = |counts: Vec<usize>| {
        let (label, probabilities) = criterion.leaf(&counts);
        Node::Leaf {
            counts,
            label,
            probabilities,
        }
    };
    if depth >= params.max_depth
        || indices.len() < 2 * params.min_samples_leaf
        || is_pure(&counts)
    {
        return make_leaf(counts);
    }
    let Some((split, _gain)) = best_split_with(data, indices, criterion, params) else {
        return make_leaf(counts);
    };
    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
        .iter()
        .partition(|&&i| data.value(i, split.feature) <= split.threshold);
    let left = build_node(data, &left_idx, criterion, params, depth + 1);
    let right = build_node(data, &right_idx, criterion, params, depth + 1);
    Node::Internal {
        split,
        left: Box::new(left),
        right: Box::new(right),
    }
}

pub(crate) fn new_tree(
    root: Node,
    schema: Arc<FeatureSchema>,
    params: TreeParams,
    method: TreeMethod,
) -> Tree {
    Tree {
        root,
        schema,
        params,
        method,
    }
}
