//! IF-THEN rule sets extracted from fitted trees.
//!
//! Every root-to-leaf path becomes one rule: left edges contribute
//! `feature <= t` antecedents, right edges `feature > t`, and the consequent
//! is the leaf's class. Antecedents along a path are merged per feature
//! (tightest bound wins), so rule sets extracted from a tree partition the
//! whole feature space: exactly one rule fires for any finite vector.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dataset::{FeatureKind, FeatureSchema};
use crate::error::{Error, Result};
use crate::tree::{Node, Tree};

/// Comparison operator of an antecedent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Op {
    /// `x[feature] <= threshold`
    Le,
    /// `x[feature] > threshold`
    Gt,
}

/// One feature-threshold condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Antecedent {
    pub feature: usize,
    pub name: String,
    pub op: Op,
    pub threshold: f64,
}

impl Antecedent {
    pub fn holds(&self, x: &[f64]) -> bool {
        match self.op {
            Op::Le => x[self.feature] <= self.threshold,
            Op::Gt => x[self.feature] > self.threshold,
        }
    }
}

/// A conjunction of antecedents with a class consequent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Rule {
    pub antecedents: Vec<Antecedent>,
    pub class_index: usize,
    pub class_name: String,
    /// Depth-first ordinal of the source leaf.
    pub leaf_id: usize,
    /// Number of path conditions before per-feature merging.
    pub raw_len: usize,
}

impl Rule {
    pub fn fires(&self, x: &[f64]) -> bool {
        self.antecedents.iter().all(|a| a.holds(x))
    }
}

/// Ordered rule list. Extraction order is depth-first left-to-right;
/// application returns the first firing rule, which is unambiguous for
/// tree-extracted sets because their rules are mutually exclusive.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
    pub n_features: usize,
    #[serde(skip, default = "default_schema")]
    schema: Arc<FeatureSchema>,
}

fn default_schema() -> Arc<FeatureSchema> {
    Arc::new(FeatureSchema::synthetic(0, 2))
}

impl RuleSet {
    pub fn new(rules: Vec<Rule>, schema: Arc<FeatureSchema>) -> Self {
        RuleSet {
            rules,
            n_features: schema.n_features(),
            schema,
        }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Consequent of the first rule whose antecedents all hold, or `None`
    /// when nothing fires (possible only for imported rule sets).
    pub fn apply(&self, x: &[f64]) -> Result<Option<usize>> {
        if x.len() != self.n_features {
            return Err(Error::Data(format!(
                "feature vector has length {}, rule set expects {}",
                x.len(),
                self.n_features
            )));
        }
        Ok(self.rules.iter().find(|r| r.fires(x)).map(|r| r.class_index))
    }

    /// `(number of rules, mean simplified antecedent count)`.
    pub fn size_metrics(&self) -> Result<(usize, f64)> {
        if self.rules.is_empty() {
            return Err(Error::Data("size metrics of an empty rule set".into()));
        }
        let total: usize = self.rules.iter().map(|r| r.antecedents.len()).sum();
        Ok((self.rules.len(), total as f64 / self.rules.len() as f64))
    }

    /// Mean antecedent count before per-feature merging, recorded alongside
    /// the simplified count for transparency.
    pub fn raw_average_length(&self) -> Result<f64> {
        if self.rules.is_empty() {
            return Err(Error::Data("size metrics of an empty rule set".into()));
        }
        let total: usize = self.rules.iter().map(|r| r.raw_len).sum();
        Ok(total as f64 / self.rules.len() as f64)
    }

    /// Text rendering, one rule per line:
    /// `IF (duration > 11.5) AND (credit_amount <= 7491.5) THEN class = good`.
    /// Antecedents on one-hot columns read as equality tests
    /// (`source = category` / `source != category`); the evaluated semantics
    /// stay threshold comparisons.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for rule in &self.rules {
            let _ = writeln!(out, "{}", self.render_rule(rule));
        }
        out
    }

    pub fn render_rule(&self, rule: &Rule) -> String {
        let mut parts = Vec::new();
        for a in &rule.antecedents {
            parts.push(format!("({})", self.render_antecedent(a)));
        }
        let body = if parts.is_empty() {
            "TRUE".to_string()
        } else {
            parts.join(" AND ")
        };
        format!("IF {body} THEN class = {}", rule.class_name)
    }

    fn render_antecedent(&self, a: &Antecedent) -> String {
        if let Some(feature) = self.schema.features.get(a.feature) {
            if let FeatureKind::OneHot { source, category } = &feature.kind {
                // 0/1 indicator column: a threshold inside (0,1) is an
                // equality test on the source category.
                if a.threshold > 0.0 && a.threshold < 1.0 {
                    return match a.op {
                        Op::Le => format!("{source} != {category}"),
                        Op::Gt => format!("{source} = {category}"),
                    };
                }
            }
        }
        let op = match a.op {
            Op::Le => "<=",
            Op::Gt => ">",
        };
        format!("{} {op} {}", a.name, a.threshold)
    }

    /// Structured JSON export: antecedent triples plus consequent per rule.
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::Internal(format!("rule set serialization failed: {e}")))
    }
}

/// Merges raw path conditions per feature: the largest `>` bound and the
/// smallest `<=` bound survive, ordered by feature index with the lower
/// bound first. A crossing interval on a root-to-leaf path is impossible in
/// a well-formed tree and reports as an internal consistency error.
pub fn simplify(antecedents: &[Antecedent]) -> Result<Vec<Antecedent>> {
    let mut features: Vec<usize> = antecedents.iter().map(|a| a.feature).collect();
    features.sort_unstable();
    features.dedup();

    let mut out = Vec::new();
    for feature in features {
        let mut lower: Option<&Antecedent> = None; // strongest '>' bound
        let mut upper: Option<&Antecedent> = None; // strongest '<=' bound
        for a in antecedents.iter().filter(|a| a.feature == feature) {
            match a.op {
                Op::Gt => {
                    if lower.is_none_or(|b| a.threshold > b.threshold) {
                        lower = Some(a);
                    }
                }
                Op::Le => {
                    if upper.is_none_or(|b| a.threshold < b.threshold) {
                        upper = Some(a);
                    }
                }
            }
        }
        if let (Some(lo), Some(hi)) = (lower, upper) {
            if lo.threshold >= hi.threshold {
                return Err(Error::Internal(format!(
                    "contradictory interval on feature {}: > {} and <= {}",
                    feature, lo.threshold, hi.threshold
                )));
            }
        }
        if let Some(lo) = lower {
            out.push(lo.clone());
        }
        if let Some(hi) = upper {
            out.push(hi.clone());
        }
    }
    Ok(out)
}

/// Converts a fitted tree into a rule set, one rule per leaf, depth-first
/// left-to-right, with per-path antecedents simplified.
pub fn extract(tree: &Tree) -> Result<RuleSet> {
    let schema = tree.schema().clone();
    let mut rules = Vec::new();
    let mut path: Vec<Antecedent> = Vec::new();
    walk(tree.root(), &schema, &mut path, &mut rules)?;
    Ok(RuleSet::new(rules, schema))
}

fn walk(
    node: &Node,
    schema: &Arc<FeatureSchema>,
    path: &mut Vec<Antecedent>,
    rules: &mut Vec<Rule>,
) -> Result<()> {
    match node {
        Node::Leaf { label, .. } => {
            let simplified = simplify(path)?;
            rules.push(Rule {
                antecedents: simplified,
                class_index: *label,
                class_name: schema.classes[*label].clone(),
                leaf_id: rules.len(),
                raw_len: path.len(),
            });
        }
        Node::Internal { split, left, right } => {
            let name = schema.features[split.feature].name.clone();
            path.push(Antecedent {
                feature: split.feature,
                name: name.clone(),
                op: Op::Le,
                threshold: split.threshold,
            });
            walk(left, schema, path, rules)?;
            path.pop();
            path.push(Antecedent {
                feature: split.feature,
                name,
                op: Op::Gt,
                threshold: split.threshold,
            });
            walk(right, schema, path, rules)?;
            path.pop();
        }
    }
    Ok(())
}
