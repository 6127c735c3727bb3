//! Class-weighted Gini baseline tree.
//!
//! Weights follow the balanced convention `w_i = n / (K * N_i)`, so rarer
//! classes weigh more. Node impurity is the Gini index over weighted class
//! proportions, scaled by the node's weighted mass so that parent-minus-
//! children gains are comparable across node sizes; leaves take the class
//! with the largest weighted count.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::tree::{fit_with, new_tree, SplitCriterion, Tree, TreeMethod, TreeParams};

/// Balanced class weights `w_i = n / (K * N_i)`. Errors on empty classes.
pub fn class_weights(counts: &[usize]) -> Result<Vec<f64>> {
    if counts.len() < 2 {
        return Err(Error::Data(format!("need at least 2 classes, got {}", counts.len())));
    }
    if let Some(i) = counts.iter().position(|&c| c == 0) {
        return Err(Error::Data(format!("empty class {i}: cannot weight a class with no samples")));
    }
    let n: usize = counts.iter().sum();
    let k = counts.len() as f64;
    Ok(counts.iter().map(|&c| n as f64 / (k * c as f64)).collect())
}

/// Weights for fitting, tolerating classes absent from the training labels:
/// an absent class gets weight zero, which never influences any node because
/// its count is zero everywhere.
fn fit_weights(counts: &[usize]) -> Vec<f64> {
    let n: usize = counts.iter().sum();
    let k = counts.len() as f64;
    counts
        .iter()
        .map(|&c| if c > 0 { n as f64 / (k * c as f64) } else { 0.0 })
        .collect()
}

pub(crate) struct GiniCriterion {
    pub(crate) weights: Vec<f64>,
}

impl GiniCriterion {
    fn weighted_counts(&self, counts: &[usize]) -> Vec<f64> {
        counts
            .iter()
            .zip(self.weights.iter())
            .map(|(&c, &w)| c as f64 * w)
            .collect()
    }

    /// Gini impurity over weighted class proportions; 0 for pure or empty
    /// nodes.
    pub(crate) fn gini(&self, counts: &[usize]) -> f64 {
        let weighted = self.weighted_counts(counts);
        let mass: f64 = weighted.iter().sum();
        if mass <= 0.0 {
            return 0.0;
        }
        1.0 - weighted.iter().map(|w| (w / mass) * (w / mass)).sum::<f64>()
    }
}

impl SplitCriterion for GiniCriterion {
    fn node_value(&self, counts: &[usize]) -> f64 {
        let mass: f64 = self.weighted_counts(counts).iter().sum();
        mass * self.gini(counts)
    }

    fn leaf(&self, counts: &[usize]) -> (usize, Vec<f64>) {
        let weighted = self.weighted_counts(counts);
        let mass: f64 = weighted.iter().sum();
        let mut label = 0usize;
        for (i, w) in weighted.iter().enumerate() {
            if *w > weighted[label] {
                label = i;
            }
        }
        let probabilities = if mass > 0.0 {
            weighted.iter().map(|w| w / mass).collect()
        } else {
            vec![1.0 / counts.len() as f64; counts.len()]
        };
        (label, probabilities)
    }
}

/// Fits the weighted-Gini baseline tree. Shares the induction engine,
/// threshold enumeration, stopping rules, and tie-breaks with the
/// cost-sensitive learner; only the split criterion and leaf labeling
/// differ.
pub fn fit_weighted(train: &Dataset, params: &TreeParams) -> Result<Tree> {
    let criterion = GiniCriterion {
        weights: fit_weights(train.class_counts()),
    };
    let root = fit_with(train, &criterion, params)?;
    let weights = criterion.weights;
    Ok(new_tree(
        root,
        train.schema().clone(),
        params.clone(),
        TreeMethod::WeightedGini { weights },
    ))
}
