//! Compares the two surrogate methods on the bundled datasets: fit-set
//! fidelity under the toy oracles, and rule-set sizes under a noisy
//! surrogate target. Run from the repository root:
//!
//!     cargo run --release -p cortex-core --example method_comparison

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cortex_core::blackbox::{get_predictions, PredictorSource};
use cortex_core::dataset::{encode, load_csv, split_indices};
use cortex_core::experiment::default_matrix_for;
use cortex_core::metrics::fidelity;
use cortex_core::rules::extract;
use cortex_core::tree::{baseline, cortex, TreeParams};

fn main() {
    fidelity_probe();
    axis_fidelity_probe();
    simplicity_probe();
}

fn axis_fidelity_probe() {
    println!("== fit-set fidelity under the axis oracle ==");
    for name in ["synth_imbalanced_a", "synth_three_class", "synth_imbalanced_b"] {
        let raw = load_csv(format!("data/{name}.csv"), "cls").unwrap();
        let data = encode(&raw).unwrap();
        let classes = data.schema().classes.join(" ");
        let source = PredictorSource::SubprocessOracle {
            command: format!("python3 scripts/axis_oracle.py {classes}"),
            workdir: None,
            timeout_secs: 60,
        };
        let bb = get_predictions(&source, &data).unwrap();
        let fit_data = data.with_labels(bb.clone()).unwrap();
        let params = TreeParams {
            max_depth: 64,
            ..TreeParams::default()
        };
        let matrix = default_matrix_for(&fit_data).unwrap();
        let ct = cortex::fit(&fit_data, &matrix, &params).unwrap();
        let dt = baseline::fit_weighted(&fit_data, &params).unwrap();
        let cr = extract(&ct).unwrap();
        let dr = extract(&dt).unwrap();
        println!(
            "{name}: cortex fidelity {:.4} ({} rules, depth {})  dt fidelity {:.4} ({} rules, depth {})",
            fidelity(&cr, &fit_data, &bb).unwrap(),
            cr.len(),
            ct.depth(),
            fidelity(&dr, &fit_data, &bb).unwrap(),
            dr.len(),
            dt.depth(),
        );
    }
}

fn fidelity_probe() {
    println!("== fit-set fidelity, matrix from fit labels ==");
    for name in ["synth_imbalanced_a", "synth_three_class", "synth_imbalanced_b", "credit_toy"] {
        let raw = load_csv(format!("data/{name}.csv"), "cls").unwrap();
        let data = encode(&raw).unwrap();
        let classes = data.schema().classes.join(" ");
        let source = PredictorSource::SubprocessOracle {
            command: format!("python3 scripts/linear_oracle.py {classes}"),
            workdir: None,
            timeout_secs: 60,
        };
        let bb = get_predictions(&source, &data).unwrap();
        let fit_data = data.with_labels(bb.clone()).unwrap();
        let params = TreeParams {
            max_depth: 64,
            ..TreeParams::default()
        };
        let matrix = default_matrix_for(&fit_data).unwrap();
        let ct = cortex::fit(&fit_data, &matrix, &params).unwrap();
        let dt = baseline::fit_weighted(&fit_data, &params).unwrap();
        let cr = extract(&ct).unwrap();
        let dr = extract(&dt).unwrap();
        println!(
            "{name}: cortex fidelity {:.4} ({} rules, depth {})  dt fidelity {:.4} ({} rules, depth {})",
            fidelity(&cr, &fit_data, &bb).unwrap(),
            cr.len(),
            ct.depth(),
            fidelity(&dr, &fit_data, &bb).unwrap(),
            dr.len(),
            dt.depth(),
        );
    }
}

fn simplicity_probe() {
    println!("== rule counts under 10% label noise, per-run fit-label matrix ==");
    for name in [
        "synth_imbalanced_a",
        "synth_imbalanced_b",
        "synth_three_class",
    ] {
        let raw = load_csv(format!("data/{name}.csv"), "cls").unwrap();
        let data = encode(&raw).unwrap();
        let k = data.n_classes();

        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let noisy: Vec<usize> = data
            .labels()
            .iter()
            .map(|&y| {
                if rng.random_range(0.0..1.0) < 0.10 {
                    (y + rng.random_range(1..k)) % k
                } else {
                    y
                }
            })
            .collect();

        let params = TreeParams::default();
        let mut cortex_rules = Vec::new();
        let mut dt_rules = Vec::new();
        for run in 0..20u64 {
            let (_, test_idx) = split_indices(&data, 0.7, run, true).unwrap();
            let test = data.subset(&test_idx).unwrap();
            let bb: Vec<usize> = test_idx.iter().map(|&i| noisy[i]).collect();
            let fit_data = test.with_labels(bb).unwrap();
            let matrix = default_matrix_for(&fit_data).unwrap();

            let ct = cortex::fit(&fit_data, &matrix, &params).unwrap();
            let dt = baseline::fit_weighted(&fit_data, &params).unwrap();
            cortex_rules.push(extract(&ct).unwrap().len() as f64);
            dt_rules.push(extract(&dt).unwrap().len() as f64);
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        println!(
            "{name}: cortex rules {:.2}  dt rules {:.2}",
            mean(&cortex_rules),
            mean(&dt_rules)
        );
    }
}
