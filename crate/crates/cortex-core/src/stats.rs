//! Nonparametric method comparison: Friedman test across k methods over n
//! blocks, pairwise Wilcoxon signed-rank tests, and normalized rank
//! aggregation.
//!
//! Conventions, documented because they matter when comparing against other
//! toolkits: ranks use average-tie assignment with rank 1 = best; the
//! Friedman p-value comes from the chi-square approximation with k-1 degrees
//! of freedom (an exact block-permutation p-value is attached when the
//! enumeration is small enough); Wilcoxon drops zero differences, uses the
//! exact sign-flip null distribution up to 25 nonzero differences and a
//! tie-corrected continuity-corrected normal approximation beyond that.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Ranking direction for a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    HigherBetter,
    LowerBetter,
}

/// n blocks × k methods of metric values for one (metric, dataset) cell.
#[derive(Debug, Clone)]
pub struct RankTable {
    pub methods: Vec<String>,
    /// `values[block][method]`
    pub values: Vec<Vec<f64>>,
    pub direction: Direction,
}

impl RankTable {
    pub fn new(methods: Vec<String>, values: Vec<Vec<f64>>, direction: Direction) -> Result<Self> {
        let k = methods.len();
        if k < 2 {
            return Err(Error::Config(format!("rank table needs >= 2 methods, got {k}")));
        }
        if values.len() < 2 {
            return Err(Error::Config(format!(
                "rank table needs >= 2 blocks, got {}",
                values.len()
            )));
        }
        for (b, row) in values.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Config(format!(
                    "block {b} has {} values for {k} methods",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Config(format!("block {b} contains a non-finite value")));
            }
        }
        Ok(RankTable {
            methods,
            values,
            direction,
        })
    }

    pub fn n_blocks(&self) -> usize {
        self.values.len()
    }

    pub fn n_methods(&self) -> usize {
        self.methods.len()
    }
}

/// Within-group ranks with average ties, rank 1 = best for the direction.
pub fn rank_row(row: &[f64], direction: Direction) -> Vec<f64> {
    let mut order: Vec<usize> = (0..row.len()).collect();
    match direction {
        Direction::HigherBetter => order.sort_by(|&a, &b| row[b].total_cmp(&row[a])),
        Direction::LowerBetter => order.sort_by(|&a, &b| row[a].total_cmp(&row[b])),
    }
    let mut ranks = vec![0.0; row.len()];
    let mut pos = 0;
    while pos < order.len() {
        let mut end = pos + 1;
        while end < order.len() && row[order[end]] == row[order[pos]] {
            end += 1;
        }
        // Positions pos..end share values: average of ranks pos+1 ..= end.
        let avg = (pos + 1 + end) as f64 / 2.0;
        for &idx in &order[pos..end] {
            ranks[idx] = avg;
        }
        pos = end;
    }
    ranks
}

/// Friedman test outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FriedmanTest {
    pub statistic: f64,
    /// Chi-square approximation with k-1 degrees of freedom.
    pub p_value: f64,
    /// Exact block-permutation p-value, present when (k!)^n is small enough
    /// to enumerate.
    pub p_exact: Option<f64>,
    pub reject: bool,
    pub alpha: f64,
    pub n_blocks: usize,
    pub n_methods: usize,
    /// Per-method rank sums (direction-adjusted, rank 1 = best).
    pub rank_sums: Vec<f64>,
}

const FRIEDMAN_EXACT_LIMIT: f64 = 400_000.0;

fn friedman_statistic_from_rank_rows(rank_rows: &[Vec<f64>], k: usize) -> (f64, Vec<f64>) {
    let n = rank_rows.len() as f64;
    let kf = k as f64;
    let mut rank_sums = vec![0.0; k];
    for row in rank_rows {
        for (j, r) in row.iter().enumerate() {
            rank_sums[j] += r;
        }
    }
    let sum_sq: f64 = rank_sums.iter().map(|r| r * r).sum();
    let statistic = 12.0 / (n * kf * (kf + 1.0)) * sum_sq - 3.0 * n * (kf + 1.0);
    (statistic, rank_sums)
}

/// Friedman test over a rank table: are the k methods exchangeable across
/// the n blocks? Rejects when the chi-square p-value falls below alpha.
pub fn friedman(table: &RankTable, alpha: f64) -> Result<FriedmanTest> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Config(format!("alpha must be in [0,1], got {alpha}")));
    }
    let k = table.n_methods();
    let n = table.n_blocks();
    let rank_rows: Vec<Vec<f64>> = table
        .values
        .iter()
        .map(|row| rank_row(row, table.direction))
        .collect();
    let (statistic, rank_sums) = friedman_statistic_from_rank_rows(&rank_rows, k);
    // A fully tied table yields statistic 0 and p 1; the chi-square CDF
    // handles that without special casing.
    let chi = ChiSquared::new((k - 1) as f64)
        .map_err(|e| Error::Internal(format!("chi-square setup failed: {e}")))?;
    let p_value = (1.0 - chi.cdf(statistic)).clamp(0.0, 1.0);

    let combos = factorial(k).powi(n as i32);
    let p_exact = if combos <= FRIEDMAN_EXACT_LIMIT {
        Some(friedman_exact_p(&rank_rows, k, statistic))
    } else {
        None
    };

    Ok(FriedmanTest {
        statistic,
        p_value,
        p_exact,
        reject: p_value < alpha,
        alpha,
        n_blocks: n,
        n_methods: k,
        rank_sums,
    })
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Exact permutation p-value: the share of all per-block rank permutations
/// whose statistic is at least the observed one. Ties inside a block are
/// preserved because the block's observed rank multiset is permuted as-is.
fn friedman_exact_p(rank_rows: &[Vec<f64>], k: usize, observed: f64) -> f64 {
    let permutations = permutations_of(k);
    let n = rank_rows.len();
    let mut at_least = 0u64;
    let mut total = 0u64;
    let mut choice = vec![0usize; n];
    loop {
        let mut rank_sums = vec![0.0; k];
        for (b, row) in rank_rows.iter().enumerate() {
            let perm = &permutations[choice[b]];
            for (j, &src) in perm.iter().enumerate() {
                rank_sums[j] += row[src];
            }
        }
        let nf = n as f64;
        let kf = k as f64;
        let sum_sq: f64 = rank_sums.iter().map(|r| r * r).sum();
        let stat = 12.0 / (nf * kf * (kf + 1.0)) * sum_sq - 3.0 * nf * (kf + 1.0);
        if stat >= observed - 1e-9 {
            at_least += 1;
        }
        total += 1;

        // Advance the mixed-radix counter over per-block permutations.
        let mut b = 0;
        loop {
            if b == n {
                return at_least as f64 / total as f64;
            }
            choice[b] += 1;
            if choice[b] < permutations.len() {
                break;
            }
            choice[b] = 0;
            b += 1;
        }
    }
}

fn permutations_of(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..k).collect();
    heap_permute(&mut items, k, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, size: usize, out: &mut Vec<Vec<usize>>) {
    if size == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..size {
        heap_permute(items, size - 1, out);
        if size % 2 == 1 {
            items.swap(0, size - 1);
        } else {
            items.swap(i, size - 1);
        }
    }
}

/// How a Wilcoxon p-value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WilcoxonMethod {
    Exact,
    NormalApproximation,
    /// Every paired difference was zero; no evidence of any effect.
    AllZero,
}

/// Wilcoxon signed-rank test outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WilcoxonTest {
    /// `min(W+, W-)` over the nonzero differences.
    pub statistic: f64,
    pub p_value: f64,
    pub reject: bool,
    pub alpha: f64,
    /// Number of nonzero differences the test ran on.
    pub n_used: usize,
    pub method: WilcoxonMethod,
}

const WILCOXON_EXACT_MAX_N: usize = 25;

/// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
/// are dropped; an all-zero pairing returns p = 1 rather than an error.
pub fn wilcoxon(a: &[f64], b: &[f64], alpha: f64) -> Result<WilcoxonTest> {
    if a.len() != b.len() {
        return Err(Error::Config(format!(
            "paired samples must have equal length, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Config(format!("alpha must be in [0,1], got {alpha}")));
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    if diffs.iter().any(|d| !d.is_finite()) {
        return Err(Error::Config("non-finite paired difference".into()));
    }
    if diffs.is_empty() {
        return Ok(WilcoxonTest {
            statistic: 0.0,
            p_value: 1.0,
            reject: false,
            alpha,
            n_used: 0,
            method: WilcoxonMethod::AllZero,
        });
    }
    let n = diffs.len();
    if n < 5 {
        return Err(Error::Config(format!(
            "wilcoxon needs >= 5 nonzero differences, got {n}"
        )));
    }

    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = rank_row(&abs, Direction::LowerBetter);
    let w_plus: f64 = diffs
        .iter()
        .zip(ranks.iter())
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let total: f64 = ranks.iter().sum();
    let w_minus = total - w_plus;
    let statistic = w_plus.min(w_minus);

    let (p_value, method) = if n <= WILCOXON_EXACT_MAX_N {
        (wilcoxon_exact_p(&ranks, statistic), WilcoxonMethod::Exact)
    } else {
        (
            wilcoxon_normal_p(&ranks, statistic)?,
            WilcoxonMethod::NormalApproximation,
        )
    };

    Ok(WilcoxonTest {
        statistic,
        p_value,
        reject: p_value < alpha,
        alpha,
        n_used: n,
        method,
    })
}

/// Exact two-sided p-value over all 2^n sign assignments of the observed
/// rank multiset: `min(1, 2 * P(W+ <= w))`, computed by dynamic programming
/// on doubled ranks (doubling makes average ties integral).
fn wilcoxon_exact_p(ranks: &[f64], w: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0.0f64; total + 1];
    counts[0] = 1.0;
    let mut reach = 0usize;
    for &r in &doubled {
        reach += r;
        for s in (0..=reach).rev() {
            if s >= r && counts[s - r] > 0.0 {
                counts[s] += counts[s - r];
            }
        }
    }
    let threshold = (w * 2.0).round() as usize;
    let below: f64 = counts.iter().take(threshold.min(total) + 1).sum();
    let denom = (ranks.len() as f64).exp2();
    (2.0 * below / denom).min(1.0)
}

/// Normal approximation with continuity correction and an Edgeworth
/// kurtosis term. Moments come straight from the observed (mid)ranks, which
/// builds the tie correction in: the statistic is a sum of `rank * Bernoulli`
/// terms, so `mean = sum(r)/2`, `var = sum(r^2)/4`, and the fourth cumulant
/// is `-sum(r^4)/8`.
fn wilcoxon_normal_p(ranks: &[f64], w: f64) -> Result<f64> {
    let mean: f64 = ranks.iter().sum::<f64>() / 2.0;
    let variance: f64 = ranks.iter().map(|r| r * r).sum::<f64>() / 4.0;
    if variance <= 0.0 {
        return Ok(1.0);
    }
    let kappa4: f64 = -ranks.iter().map(|r| r * r * r * r).sum::<f64>() / 8.0;
    let gamma2 = kappa4 / (variance * variance);
    let sd = variance.sqrt();
    let z = (w - mean + 0.5) / sd;
    let normal = Normal::new(0.0, 1.0)
        .map_err(|e| Error::Internal(format!("normal setup failed: {e}")))?;
    let phi = (-z * z / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let lower_tail = normal.cdf(z) - gamma2 / 24.0 * (z * z * z - 3.0 * z) * phi;
    Ok((2.0 * lower_tail).clamp(0.0, 1.0))
}

/// Per-method normalized rank sums in [0, 1]: rank the methods within each
/// run, sum ranks across runs, and min-max normalize over the achievable
/// range `[n, n*k]` so 0 is the best possible total and 1 the worst.
pub fn rank_and_normalize(per_method: &[Vec<f64>], direction: Direction) -> Result<Vec<f64>> {
    let k = per_method.len();
    if k < 2 {
        return Err(Error::Config(format!("need >= 2 methods to rank, got {k}")));
    }
    let n = per_method[0].len();
    if n == 0 {
        return Err(Error::Config("need >= 1 run to rank".into()));
    }
    if per_method.iter().any(|runs| runs.len() != n) {
        return Err(Error::Config("methods must have the same number of runs".into()));
    }
    let mut sums = vec![0.0; k];
    for run in 0..n {
        let row: Vec<f64> = per_method.iter().map(|runs| runs[run]).collect();
        for (j, r) in rank_row(&row, direction).iter().enumerate() {
            sums[j] += r;
        }
    }
    let lo = n as f64;
    let hi = (n * k) as f64;
    Ok(sums.iter().map(|s| (s - lo) / (hi - lo)).collect())
}
