//! Rule-set evaluation metrics: completeness, correctness, fidelity, and
//! robustness. Uncovered samples count against correctness and fidelity
//! (the denominator is always the full sample count), and robustness is the
//! fraction of samples whose rule prediction is unchanged under Gaussian
//! input noise, so higher means more robust.

use serde::{Deserialize, Serialize};

use crate::dataset::{perturb, Dataset};
use crate::error::{Error, Result};
use crate::rules::RuleSet;

/// One method's metric values for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub method: String,
    pub dataset: String,
    pub run: usize,
    pub seed: u64,
    pub completeness: f64,
    pub correctness: f64,
    pub fidelity: f64,
    pub robustness: f64,
    pub n_rules: usize,
    pub avg_rule_length: f64,
    /// Antecedent count before per-feature merging, kept for transparency.
    pub avg_rule_length_raw: f64,
    /// Noise level used for the robustness column.
    pub noise_sigma: f64,
}

impl MetricRecord {
    /// Metric value by report column name.
    pub fn value(&self, metric: &str) -> Option<f64> {
        match metric {
            "completeness" => Some(self.completeness),
            "correctness" => Some(self.correctness),
            "fidelity" => Some(self.fidelity),
            "robustness" => Some(self.robustness),
            "n_rules" => Some(self.n_rules as f64),
            "avg_rule_length" => Some(self.avg_rule_length),
            _ => None,
        }
    }
}

/// The six metric column names in report order, each with its ranking
/// direction (`true` = higher is better).
pub const METRIC_DIRECTIONS: [(&str, bool); 6] = [
    ("completeness", true),
    ("correctness", true),
    ("fidelity", true),
    ("robustness", true),
    ("n_rules", false),
    ("avg_rule_length", false),
];

/// Fraction of samples covered by at least one rule.
pub fn completeness(rules: &RuleSet, samples: &Dataset) -> Result<f64> {
    let n = samples.n_rows();
    let mut covered = 0usize;
    for row in samples.rows() {
        if rules.apply(row)?.is_some() {
            covered += 1;
        }
    }
    Ok(covered as f64 / n as f64)
}

/// Fraction of samples the rules classify to the true label; uncovered
/// samples count as incorrect.
pub fn correctness(rules: &RuleSet, samples: &Dataset) -> Result<f64> {
    agreement(rules, samples, samples.labels())
}

/// Fraction of samples where the rules agree with the black-box prediction;
/// uncovered samples count as disagreement.
pub fn fidelity(rules: &RuleSet, samples: &Dataset, blackbox: &[usize]) -> Result<f64> {
    if blackbox.len() != samples.n_rows() {
        return Err(Error::Data(format!(
            "black-box label count {} does not match sample count {}",
            blackbox.len(),
            samples.n_rows()
        )));
    }
    agreement(rules, samples, blackbox)
}

fn agreement(rules: &RuleSet, samples: &Dataset, targets: &[usize]) -> Result<f64> {
    let n = samples.n_rows();
    let mut agree = 0usize;
    for (row, &target) in samples.rows().zip(targets) {
        if rules.apply(row)? == Some(target) {
            agree += 1;
        }
    }
    Ok(agree as f64 / n as f64)
}

/// Fraction of samples whose rule prediction is unchanged after adding
/// zero-mean Gaussian noise with per-feature scales. Exactly 1.0 at
/// `sigma == 0`.
pub fn robustness(
    rules: &RuleSet,
    samples: &Dataset,
    sigma: f64,
    feature_scales: &[f64],
    seed: u64,
) -> Result<f64> {
    let noisy = perturb(samples, sigma, feature_scales, seed)?;
    let n = samples.n_rows();
    let mut unchanged = 0usize;
    for (row, noisy_row) in samples.rows().zip(noisy.rows()) {
        if rules.apply(row)? == rules.apply(noisy_row)? {
            unchanged += 1;
        }
    }
    Ok(unchanged as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostMatrix;
    use crate::rules::{extract, Antecedent, Op, Rule};
    use crate::tree::{cortex, TreeParams};
    use crate::dataset::FeatureSchema;
    use std::sync::Arc;

    fn separable() -> Dataset {
        Dataset::from_parts(
            vec![vec![1.0], vec![2.0], vec![3.0], vec![4.0]],
            vec![0, 0, 1, 1],
            2,
        )
        .unwrap()
    }

    fn fitted_rules(data: &Dataset) -> RuleSet {
        let m = CostMatrix::unit(2).unwrap();
        let tree = cortex::fit(data, &m, &TreeParams::default()).unwrap();
        extract(&tree).unwrap()
    }

    fn partial_rules() -> RuleSet {
        // Covers only x0 > 2: two of four samples in `separable`.
        let schema = Arc::new(FeatureSchema::synthetic(1, 2));
        RuleSet::new(
            vec![Rule {
                antecedents: vec![Antecedent {
                    feature: 0,
                    name: "x0".into(),
                    op: Op::Gt,
                    threshold: 2.0,
                }],
                class_index: 1,
                class_name: "1".into(),
                leaf_id: 0,
                raw_len: 1,
            }],
            schema,
        )
    }

    #[test]
    fn completeness_is_one_for_tree_rules() {
        let data = separable();
        let rules = fitted_rules(&data);
        assert_eq!(completeness(&rules, &data).unwrap(), 1.0);
    }

    #[test]
    fn completeness_counts_partial_coverage() {
        let data = separable();
        assert_eq!(completeness(&partial_rules(), &data).unwrap(), 0.5);
    }

    #[test]
    fn correctness_counts_matches() {
        let data = separable();
        let rules = fitted_rules(&data);
        assert_eq!(correctness(&rules, &data).unwrap(), 1.0);
        // Partial rules classify only the two class-1 samples.
        assert_eq!(correctness(&partial_rules(), &data).unwrap(), 0.5);
    }

    #[test]
    fn correctness_example_two_of_three() {
        let data = Dataset::from_parts(
            vec![vec![1.0], vec![3.0], vec![2.0]],
            vec![0, 1, 1],
            2,
        )
        .unwrap();
        // Tree rules predict [0, 1, 0] against truth [0, 1, 1].
        let rules = fitted_rules(&separable());
        assert!((correctness(&rules, &data).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_against_blackbox_labels() {
        let data = separable();
        let rules = fitted_rules(&data);
        assert_eq!(fidelity(&rules, &data, &[0, 0, 1, 1]).unwrap(), 1.0);
        assert_eq!(fidelity(&rules, &data, &[0, 1, 1, 0]).unwrap(), 0.5);
    }

    #[test]
    fn fidelity_equals_correctness_when_blackbox_is_truth() {
        let data = separable();
        let rules = partial_rules();
        let f = fidelity(&rules, &data, data.labels()).unwrap();
        let c = correctness(&rules, &data).unwrap();
        assert_eq!(f, c);
    }

    #[test]
    fn fidelity_rejects_length_mismatch() {
        let data = separable();
        let rules = fitted_rules(&data);
        assert!(fidelity(&rules, &data, &[0, 1]).is_err());
    }

    #[test]
    fn robustness_sigma_zero_is_exactly_one() {
        let data = separable();
        let rules = fitted_rules(&data);
        assert_eq!(robustness(&rules, &data, 0.0, &[1.0], 7).unwrap(), 1.0);
    }

    #[test]
    fn robustness_constant_rule_is_one_at_any_sigma() {
        let data = separable();
        let schema = Arc::new(FeatureSchema::synthetic(1, 2));
        let constant = RuleSet::new(
            vec![Rule {
                antecedents: vec![],
                class_index: 0,
                class_name: "0".into(),
                leaf_id: 0,
                raw_len: 0,
            }],
            schema,
        );
        assert_eq!(robustness(&constant, &data, 5.0, &[1.0], 3).unwrap(), 1.0);
    }

    #[test]
    fn robustness_counts_changed_predictions() {
        // Samples sit 0.1 from the 2.5 boundary; large noise flips some.
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![if i % 2 == 0 { 2.4 } else { 2.6 }])
            .collect();
        let labels: Vec<usize> = (0..10).map(|i| i % 2).collect();
        let data = Dataset::from_parts(rows, labels, 2).unwrap();
        let rules = fitted_rules(&separable());
        let r = robustness(&rules, &data, 2.0, &[1.0], 11).unwrap();
        assert!(r < 1.0, "large noise near the boundary must flip something");
        assert!(r >= 0.0);
    }

    #[test]
    fn proportions_stay_in_unit_interval() {
        let data = separable();
        for rules in [fitted_rules(&data), partial_rules()] {
            for v in [
                completeness(&rules, &data).unwrap(),
                correctness(&rules, &data).unwrap(),
                fidelity(&rules, &data, &[1, 1, 0, 0]).unwrap(),
                robustness(&rules, &data, 0.3, &[1.0], 5).unwrap(),
            ] {
                assert!((0.0..=1.0).contains(&v), "{v}");
            }
            let comp = completeness(&rules, &data).unwrap();
            assert!(correctness(&rules, &data).unwrap() <= comp);
            assert!(fidelity(&rules, &data, data.labels()).unwrap() <= comp);
        }
    }
}
