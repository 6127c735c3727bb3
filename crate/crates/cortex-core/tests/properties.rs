//! Cross-module invariants, checked over generated inputs.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cortex_core::cost::CostMatrix;
use cortex_core::dataset::{split_indices, Dataset};
use cortex_core::rules::{extract, Antecedent, Op};
use cortex_core::tree::baseline::{class_weights, fit_weighted};
use cortex_core::tree::cortex::{fit, label_node, node_cost, soft_probabilities};
use cortex_core::tree::{Node, Tree, TreeParams};

fn counts_strategy(k: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..50, k).prop_filter("nonempty node", |c| c.iter().sum::<usize>() > 0)
}

/// Valid cost matrix: zero-ish diagonal, strictly larger off-diagonal.
fn matrix_strategy(k: usize) -> impl Strategy<Value = CostMatrix> {
    let entries = prop::collection::vec(prop::collection::vec(0.01f64..10.0, k), k);
    let diag = prop::collection::vec(0.0f64..0.5, k);
    (entries, diag).prop_map(move |(off, diag)| {
        let costs: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { diag[i] } else { diag[i] + 0.5 + off[i][j] })
                    .collect()
            })
            .collect();
        CostMatrix::new(costs).unwrap()
    })
}

proptest! {
    #[test]
    fn soft_probability_argmax_matches_least_costly_label(
        k in 2usize..=6,
        seed in 0u64..1000,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let counts: Vec<usize> = (0..k).map(|_| rng.random_range(0..40)).collect();
        prop_assume!(counts.iter().sum::<usize>() > 0);
        let matrix = random_valid_matrix(&mut rng, k);
        let (label, _) = label_node(&counts, &matrix).unwrap();
        let probs = soft_probabilities(&counts, &matrix).unwrap();
        let argmax = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(&a.0)))
            .unwrap()
            .0;
        prop_assert_eq!(argmax, label);
        let total: f64 = probs.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        prop_assert!(probs.iter().all(|p| (0.0..=1.0).contains(p)));
    }

    #[test]
    fn label_decisions_are_scale_invariant(
        counts in counts_strategy(4),
        matrix in matrix_strategy(4),
        lambda in 0.01f64..100.0,
    ) {
        let scaled = matrix.scaled(lambda).unwrap();
        let (a, _) = label_node(&counts, &matrix).unwrap();
        let (b, _) = label_node(&counts, &scaled).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn unit_costs_reduce_to_majority_vote(counts in counts_strategy(5)) {
        let unit = CostMatrix::unit(5).unwrap();
        let (label, _) = label_node(&counts, &unit).unwrap();
        let majority = counts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .unwrap()
            .0;
        prop_assert_eq!(label, majority);
    }

    #[test]
    fn default_matrix_is_reasonable_and_minority_heavy(
        counts in prop::collection::vec(1usize..10_000, 2..10),
    ) {
        let matrix = CostMatrix::default_from_counts(&counts).unwrap();
        prop_assert!(matrix.validate().is_valid());
        for i in 0..counts.len() {
            for j in 0..counts.len() {
                if i != j {
                    prop_assert!(matrix.cost(i, j) > 1.0);
                    if counts[i] < counts[j] {
                        prop_assert!(matrix.cost(i, j) > matrix.cost(j, i));
                    }
                }
            }
        }
    }

    #[test]
    fn weighted_argmax_is_a_cost_labeling(
        class_totals in prop::collection::vec(1usize..500, 4),
        node_counts in counts_strategy(4),
    ) {
        // argmax_i w_i * N_mi over a node equals the least costly class
        // under the matrix whose row i is w_i off the diagonal, 0 on it.
        let weights = class_weights(&class_totals).unwrap();
        let costs: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { 0.0 } else { weights[i] }).collect())
            .collect();
        let bridge = CostMatrix::new(costs).unwrap();
        let (label, _) = label_node(&node_counts, &bridge).unwrap();
        let weighted_argmax = (0..4)
            .max_by(|&a, &b| {
                (weights[a] * node_counts[a] as f64)
                    .partial_cmp(&(weights[b] * node_counts[b] as f64))
                    .unwrap()
                    .then(b.cmp(&a))
            })
            .unwrap();
        prop_assert_eq!(label, weighted_argmax);
    }

    #[test]
    fn split_partitions_are_exact(
        n in 4usize..200,
        fraction in 0.05f64..0.95,
        seed in 0u64..500,
        stratified in any::<bool>(),
    ) {
        let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64]).collect();
        let labels: Vec<usize> = (0..n).map(|i| i % 2).collect();
        let data = Dataset::from_parts(rows, labels, 2).unwrap();
        prop_assume!(!stratified || data.class_counts().iter().all(|&c| c >= 2));
        let (train, test) = split_indices(&data, fraction, seed, stratified).unwrap();
        let mut all: Vec<usize> = train.iter().chain(test.iter()).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert!(!train.is_empty());
        prop_assert!(!test.is_empty());
    }
}

fn random_valid_matrix(rng: &mut ChaCha8Rng, k: usize) -> CostMatrix {
    let costs: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let diag: f64 = rng.random_range(0.0..0.5);
            (0..k)
                .map(|j| {
                    if i == j {
                        diag
                    } else {
                        diag + rng.random_range(0.05..10.0)
                    }
                })
                .collect()
        })
        .collect();
    CostMatrix::new(costs).unwrap()
}

fn random_dataset(rng: &mut ChaCha8Rng, n: usize, p: usize, k: usize) -> Dataset {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..p).map(|_| rng.random_range(-5.0..5.0)).collect())
        .collect();
    let labels: Vec<usize> = (0..n)
        .map(|i| {
            if i < k {
                i // every class present at least once
            } else {
                rng.random_range(0..k)
            }
        })
        .collect();
    Dataset::from_parts(rows, labels, k).unwrap()
}

fn fitted_pair(seed: u64) -> (Dataset, Tree) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(30..120);
    let p = rng.random_range(1..4);
    let k = rng.random_range(2..4);
    let data = random_dataset(&mut rng, n, p, k);
    let tree = if seed.is_multiple_of(2) {
        let matrix = CostMatrix::default_from_counts(data.class_counts()).unwrap();
        fit(&data, &matrix, &TreeParams::default()).unwrap()
    } else {
        fit_weighted(&data, &TreeParams::default()).unwrap()
    };
    (data, tree)
}

#[test]
fn rules_replicate_tree_predictions_exactly() {
    for seed in 0..20 {
        let (data, tree) = fitted_pair(seed);
        let rules = extract(&tree).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
        for row in data.rows() {
            let (label, _) = tree.predict(row).unwrap();
            assert_eq!(rules.apply(row).unwrap(), Some(label));
        }
        for _ in 0..500 {
            let x: Vec<f64> = (0..data.n_features())
                .map(|_| rng.random_range(-10.0..10.0))
                .collect();
            let (label, _) = tree.predict(&x).unwrap();
            assert_eq!(rules.apply(&x).unwrap(), Some(label), "seed {seed}, x {x:?}");
        }
    }
}

/// Raw path conditions and simplified antecedents must describe the same
/// region of feature space.
#[test]
fn simplification_preserves_rule_regions() {
    fn raw_paths(node: &Node, prefix: &mut Vec<Antecedent>, out: &mut Vec<Vec<Antecedent>>) {
        match node {
            Node::Leaf { .. } => out.push(prefix.clone()),
            Node::Internal { split, left, right } => {
                let mk = |op| Antecedent {
                    feature: split.feature,
                    name: format!("x{}", split.feature),
                    op,
                    threshold: split.threshold,
                };
                prefix.push(mk(Op::Le));
                raw_paths(left, prefix, out);
                prefix.pop();
                prefix.push(mk(Op::Gt));
                raw_paths(right, prefix, out);
                prefix.pop();
            }
        }
    }

    for seed in 0..10 {
        let (data, tree) = fitted_pair(seed);
        let rules = extract(&tree).unwrap();
        let mut paths = Vec::new();
        raw_paths(tree.root(), &mut Vec::new(), &mut paths);
        assert_eq!(paths.len(), rules.rules.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
        for _ in 0..300 {
            let x: Vec<f64> = (0..data.n_features())
                .map(|_| rng.random_range(-10.0..10.0))
                .collect();
            for (raw, rule) in paths.iter().zip(rules.rules.iter()) {
                let raw_holds = raw.iter().all(|a| a.holds(&x));
                assert_eq!(raw_holds, rule.fires(&x), "seed {seed}");
            }
        }
    }
}

/// Every internal node's children must strictly reduce the criterion value
/// by more than the configured minimum gain.
#[test]
fn fitted_trees_have_monotone_gain() {
    fn leaf_counts(node: &Node) -> Vec<usize> {
        match node {
            Node::Leaf { counts, .. } => counts.clone(),
            Node::Internal { left, right, .. } => {
                let l = leaf_counts(left);
                let r = leaf_counts(right);
                l.iter().zip(r.iter()).map(|(a, b)| a + b).collect()
            }
        }
    }

    fn check(node: &Node, matrix: &CostMatrix, min_gain: f64) {
        if let Node::Internal { left, right, .. } = node {
            let parent = label_node(&leaf_counts(node), matrix).unwrap().1;
            let l = label_node(&leaf_counts(left), matrix).unwrap().1;
            let r = label_node(&leaf_counts(right), matrix).unwrap().1;
            assert!(
                parent - (l + r) > min_gain,
                "split gain {} not above {min_gain}",
                parent - (l + r)
            );
            check(left, matrix, min_gain);
            check(right, matrix, min_gain);
        }
    }

    for seed in [0u64, 2, 4, 6, 8, 10] {
        let (_, tree) = fitted_pair(seed); // even seeds produce cortex trees
        let matrix = match tree.method() {
            cortex_core::tree::TreeMethod::Cortex { cost_matrix } => cost_matrix.clone(),
            _ => unreachable!("even seeds fit cost trees"),
        };
        check(tree.root(), &matrix, tree.params().min_gain);
    }
}

/// With unit costs, fitted leaf labels equal majority vote on the leaf's own
/// counts.
#[test]
fn unit_cost_trees_label_leaves_by_majority() {
    fn check(node: &Node) {
        match node {
            Node::Leaf { counts, label, .. } => {
                let majority = counts
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                    .unwrap()
                    .0;
                assert_eq!(*label, majority);
            }
            Node::Internal { left, right, .. } => {
                check(left);
                check(right);
            }
        }
    }
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = random_dataset(&mut rng, 80, 2, 3);
        let unit = CostMatrix::unit(3).unwrap();
        let tree = fit(&data, &unit, &TreeParams::default()).unwrap();
        check(tree.root());
    }
}

/// Prediction is total: any finite vector reaches a leaf.
#[test]
fn predict_is_total_on_wild_inputs() {
    let (data, tree) = fitted_pair(3);
    let extremes = [f64::MIN, f64::MAX, 0.0, -0.0, 1e-300, -1e300];
    for &a in &extremes {
        for &b in &extremes {
            let mut x = vec![a; data.n_features()];
            if data.n_features() > 1 {
                x[1] = b;
            }
            tree.predict(&x).unwrap();
        }
    }
}

#[test]
fn node_cost_is_linear_in_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let k = rng.random_range(2..6);
        let matrix = random_valid_matrix(&mut rng, k);
        let a: Vec<usize> = (0..k).map(|_| rng.random_range(0..30)).collect();
        let b: Vec<usize> = (0..k).map(|_| rng.random_range(0..30)).collect();
        let sum: Vec<usize> = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
        for label in 0..k {
            let direct = node_cost(&sum, &matrix, label);
            let parts = node_cost(&a, &matrix, label) + node_cost(&b, &matrix, label);
            assert!((direct - parts).abs() < 1e-9);
        }
    }
}
