//! Cost-sensitive tree induction: leaves take the least costly class, splits
//! maximize direct misclassification-cost reduction, and each leaf carries a
//! cost-derived probability vector.
//!
//! The probability formula normalizes per-class label costs to fractions
//! `a_k = cost_k / sum(cost)` and sets `p_k = (1 - a_k) / (K - 1)`, which
//! sums to one and ranks classes exactly opposite to their costs, so the
//! probability argmax always agrees with the least-costly label. An all-zero
//! cost node falls back to the uniform distribution.

use crate::cost::CostMatrix;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::tree::{
    best_split_with, fit_with, new_tree, SplitCriterion, SplitRule, Tree, TreeMethod, TreeParams,
};

/// Total misclassification cost of labeling a node with class `k`:
/// `sum_i counts[i] * C[i][k]`.
pub fn node_cost(counts: &[usize], matrix: &CostMatrix, k: usize) -> f64 {
    counts
        .iter()
        .enumerate()
        .map(|(i, &n)| n as f64 * matrix.cost(i, k))
        .sum()
}

/// Least costly class for a node and its cost. Ties break to the lowest
/// class index.
pub fn label_node(counts: &[usize], matrix: &CostMatrix) -> Result<(usize, f64)> {
    if counts.iter().all(|&c| c == 0) {
        return Err(Error::Data("cannot label an empty node".into()));
    }
    let k = matrix.n_classes();
    let mut best = (0usize, node_cost(counts, matrix, 0));
    for label in 1..k {
        let cost = node_cost(counts, matrix, label);
        if cost < best.1 {
            best = (label, cost);
        }
    }
    Ok(best)
}

/// Cost-sensitive class probabilities for a node. Sums to one within 1e-9;
/// the argmax matches [`label_node`] under the shared lowest-index
/// tie-break.
pub fn soft_probabilities(counts: &[usize], matrix: &CostMatrix) -> Result<Vec<f64>> {
    if counts.iter().all(|&c| c == 0) {
        return Err(Error::Data("cannot compute probabilities for an empty node".into()));
    }
    let k = matrix.n_classes();
    let costs: Vec<f64> = (0..k).map(|label| node_cost(counts, matrix, label)).collect();
    let total: f64 = costs.iter().sum();
    if total > 0.0 {
        Ok(costs
            .iter()
            .map(|c| (1.0 - c / total) / (k as f64 - 1.0))
            .collect())
    } else {
        Ok(vec![1.0 / k as f64; k])
    }
}

pub(crate) struct CostCriterion<'a> {
    matrix: &'a CostMatrix,
}

impl SplitCriterion for CostCriterion<'_> {
    fn node_value(&self, counts: &[usize]) -> f64 {
        if counts.iter().all(|&c| c == 0) {
            return 0.0;
        }
        label_node(counts, self.matrix).expect("nonempty node").1
    }

    fn leaf(&self, counts: &[usize]) -> (usize, Vec<f64>) {
        let (label, _) = label_node(counts, self.matrix).expect("nonempty node");
        let probabilities = soft_probabilities(counts, self.matrix).expect("nonempty node");
        (label, probabilities)
    }
}

/// Best cost-reducing split of the node rows given by `indices`, or `None`
/// when no split clears the minimum gain.
pub fn best_split(
    data: &Dataset,
    indices: &[usize],
    matrix: &CostMatrix,
    params: &TreeParams,
) -> Result<Option<(SplitRule, f64)>> {
    matrix.ensure_classes(data.n_classes())?;
    params.validate()?;
    Ok(best_split_with(data, indices, &CostCriterion { matrix }, params))
}

/// Fits a cost-sensitive tree to the dataset. Deterministic for fixed
/// inputs.
pub fn fit(train: &Dataset, matrix: &CostMatrix, params: &TreeParams) -> Result<Tree> {
    matrix.ensure_classes(train.n_classes())?;
    let root = fit_with(train, &CostCriterion { matrix }, params)?;
    Ok(new_tree(
        root,
        train.schema().clone(),
        params.clone(),
        TreeMethod::Cortex {
            cost_matrix: matrix.clone(),
        },
    ))
}
