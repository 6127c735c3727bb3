//! The full evaluation harness: ingest a dataset, repeatedly split it,
//! obtain black-box predictions for the held-out portion, fit both surrogate
//! tree methods to those predictions, extract rules, score the six metrics,
//! and aggregate everything into a report with nonparametric statistics.
//!
//! Surrogates are fit on the held-out split labeled by the black box and all
//! metrics are computed on that same portion; `eval_holdout` switches to a
//! generalization-style protocol that fits on half of the held-out portion
//! and scores on the other half. Runs are seeded as `base_seed + run`, so
//! any single run can be reproduced in isolation, and a failed run aborts
//! the whole experiment rather than silently skewing the aggregates.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blackbox::{get_predictions, PredictorSource};
use crate::cost::CostMatrix;
use crate::dataset::{encode, load_csv, split_indices, Dataset};
use crate::error::{Error, Result};
use crate::metrics::{
    completeness, correctness, fidelity, robustness, MetricRecord, METRIC_DIRECTIONS,
};
use crate::rules::{extract, RuleSet};
use crate::stats::{friedman, rank_and_normalize, wilcoxon, Direction, FriedmanTest, RankTable, WilcoxonTest};
use crate::tree::{baseline, cortex, Tree, TreeParams};

/// Surrogate methods the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Cortex,
    Dt,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Cortex => "cortex",
            Method::Dt => "dt",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cortex" => Ok(Method::Cortex),
            "dt" => Ok(Method::Dt),
            other => Err(Error::Config(format!(
                "unknown method {other:?}; expected cortex or dt"
            ))),
        }
    }
}

/// Where the cost matrix comes from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostSource {
    /// Built per run from the class counts of the surrogate's fit labels.
    #[default]
    Default,
    /// Headerless K×K CSV, rows in lexicographic class order.
    File(PathBuf),
}

/// Report output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" => Ok(ReportFormat::Text),
            other => Err(Error::Config(format!(
                "unknown format {other:?}; expected json, csv, or text"
            ))),
        }
    }
}

fn default_train_fraction() -> f64 {
    0.7
}
fn default_stratified() -> bool {
    true
}
fn default_repeats() -> usize {
    100
}
fn default_noise_sigma() -> f64 {
    0.1
}
fn default_methods() -> Vec<Method> {
    vec![Method::Cortex, Method::Dt]
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("cortex_out")
}
fn default_parallelism() -> usize {
    1
}
fn default_formats() -> Vec<ReportFormat> {
    vec![ReportFormat::Json, ReportFormat::Csv, ReportFormat::Text]
}

/// Everything one experiment needs. Deserializable from a JSON config file;
/// the CLI overrides individual fields with flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub data_path: PathBuf,
    pub target: String,
    pub predictor: PredictorSource,
    #[serde(default)]
    pub cost_matrix: CostSource,
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
    #[serde(default = "default_stratified")]
    pub stratified: bool,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_noise_sigma")]
    pub noise_sigma: f64,
    #[serde(default)]
    pub cortex_params: TreeParams,
    #[serde(default)]
    pub dt_params: TreeParams,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default = "default_formats")]
    pub formats: Vec<ReportFormat>,
    /// Fit surrogates on half of the held-out portion and evaluate on the
    /// other half instead of scoring on the fit set.
    #[serde(default)]
    pub eval_holdout: bool,
    /// Defaults to the data file stem.
    #[serde(default)]
    pub dataset_name: Option<String>,
    /// Significance level for both statistical tests.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_alpha() -> f64 {
    0.05
}

impl RunConfig {
    pub fn new(data_path: impl Into<PathBuf>, target: &str, predictor: PredictorSource) -> Self {
        RunConfig {
            data_path: data_path.into(),
            target: target.to_string(),
            predictor,
            cost_matrix: CostSource::Default,
            train_fraction: default_train_fraction(),
            stratified: default_stratified(),
            repeats: default_repeats(),
            base_seed: 0,
            noise_sigma: default_noise_sigma(),
            cortex_params: TreeParams::default(),
            dt_params: TreeParams::default(),
            methods: default_methods(),
            output_dir: default_output_dir(),
            parallelism: default_parallelism(),
            formats: default_formats(),
            eval_holdout: false,
            dataset_name: None,
            alpha: default_alpha(),
        }
    }

    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Config(format!("bad config file: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats < 1 {
            return Err(Error::Config("repeats must be >= 1".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Config(format!(
                "train fraction must be in (0,1), got {}",
                self.train_fraction
            )));
        }
        if self.noise_sigma < 0.0 || !self.noise_sigma.is_finite() {
            return Err(Error::Config(format!(
                "noise sigma must be finite and >= 0, got {}",
                self.noise_sigma
            )));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("at least one method must be enabled".into()));
        }
        let mut seen = Vec::new();
        for m in &self.methods {
            if seen.contains(m) {
                return Err(Error::Config(format!("method {} listed twice", m.name())));
            }
            seen.push(*m);
        }
        if self.parallelism < 1 {
            return Err(Error::Config("parallelism must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Config(format!("alpha must be in [0,1], got {}", self.alpha)));
        }
        self.cortex_params.validate()?;
        self.dt_params.validate()?;
        Ok(())
    }

    fn resolved_dataset_name(&self) -> String {
        self.dataset_name.clone().unwrap_or_else(|| {
            self.data_path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".to_string())
        })
    }
}

/// Mean/std cell of the summary grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricSummary {
    pub metric: String,
    pub method: String,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FriedmanSection {
    pub metric: String,
    pub test: Option<FriedmanTest>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WilcoxonSection {
    pub metric: String,
    pub method_a: String,
    pub method_b: String,
    pub test: Option<WilcoxonTest>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MethodRank {
    pub method: String,
    pub normalized_rank: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankSection {
    pub metric: String,
    pub ranks: Vec<MethodRank>,
}

/// One extracted rule set, kept both structured and rendered.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleSetRecord {
    pub method: String,
    pub run: usize,
    pub rules: RuleSet,
    pub text: String,
}

/// Everything an experiment produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub config: RunConfig,
    pub dataset: String,
    pub methods: Vec<String>,
    pub records: Vec<MetricRecord>,
    pub summaries: Vec<MetricSummary>,
    pub friedman: Vec<FriedmanSection>,
    pub wilcoxon: Vec<WilcoxonSection>,
    pub normalized_ranks: Vec<RankSection>,
    /// Mean of the per-metric normalized ranks; lower is better.
    pub overall_ranks: Vec<MethodRank>,
    pub rule_sets: Vec<RuleSetRecord>,
}

impl EvaluationReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::Internal(format!("report serialization failed: {e}")))
    }

    /// Per-run values of one metric for one method, in run order.
    pub fn metric_values(&self, metric: &str, method: &str) -> Vec<f64> {
        let mut rows: Vec<(usize, f64)> = self
            .records
            .iter()
            .filter(|r| r.method == method)
            .filter_map(|r| r.value(metric).map(|v| (r.run, v)))
            .collect();
        rows.sort_by_key(|(run, _)| *run);
        rows.into_iter().map(|(_, v)| v).collect()
    }
}

fn with_run_context(err: Error, run: usize) -> Error {
    let msg = |m: String| format!("run {run}: {m}");
    match err {
        Error::Config(m) => Error::Config(msg(m)),
        Error::Data(m) => Error::Data(msg(m)),
        Error::Oracle(m) => Error::Oracle(msg(m)),
        Error::Internal(m) => Error::Internal(msg(m)),
        io @ Error::Io { .. } => io,
    }
}

/// Noise seed for the robustness metric, derived from the run seed with a
/// fixed odd multiplier so the two streams never collide.
fn robustness_seed(run_seed: u64) -> u64 {
    run_seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(0x1234_5678_9ABC_DEF1)
}

struct RunOutput {
    records: Vec<MetricRecord>,
    rule_sets: Vec<RuleSetRecord>,
}

fn fit_method(
    method: Method,
    train: &Dataset,
    matrix: &CostMatrix,
    config: &RunConfig,
) -> Result<Tree> {
    match method {
        Method::Cortex => cortex::fit(train, matrix, &config.cortex_params),
        Method::Dt => baseline::fit_weighted(train, &config.dt_params),
    }
}

/// Default cost matrix for one run: built from the class counts of the
/// labels the surrogate is fit to (the black-box predictions), so the cost
/// model reflects the imbalance the tree actually sees. Classes the black
/// box never emitted get a count floor of one to keep the ratios defined.
pub fn default_matrix_for(fit_data: &Dataset) -> Result<CostMatrix> {
    let counts: Vec<usize> = fit_data.class_counts().iter().map(|&c| c.max(1)).collect();
    CostMatrix::default_from_counts(&counts)
}

fn run_once(
    run: usize,
    config: &RunConfig,
    data: &Dataset,
    fixed_matrix: Option<&CostMatrix>,
    file_predictions: Option<&[usize]>,
    dataset_name: &str,
) -> Result<RunOutput> {
    let seed = config.base_seed + run as u64;
    let (train_idx, test_idx) =
        split_indices(data, config.train_fraction, seed, config.stratified)?;
    let train = data.subset(&train_idx)?;
    let test = data.subset(&test_idx)?;
    let scales = train.feature_stds();

    // Black-box predictions for the held-out portion.
    let blackbox: Vec<usize> = match file_predictions {
        Some(all) => test_idx.iter().map(|&i| all[i]).collect(),
        None => get_predictions(&config.predictor, &test)?,
    };

    // Fit set and evaluation set. The default protocol fits on the held-out
    // portion and evaluates there too; eval_holdout splits it in half.
    let (fit_data, eval_data, eval_blackbox) = if config.eval_holdout {
        let positions: Vec<usize> = (0..test.n_rows()).collect();
        let half = (test.n_rows() / 2).max(1);
        if test.n_rows() < 2 {
            return Err(Error::Data(
                "eval_holdout needs at least 2 held-out samples".into(),
            ));
        }
        let mut shuffled = positions;
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(robustness_seed(seed) ^ 0xE7A1);
        shuffled.shuffle(&mut rng);
        let (fit_pos, eval_pos) = shuffled.split_at(half);
        let mut fit_pos = fit_pos.to_vec();
        let mut eval_pos = eval_pos.to_vec();
        fit_pos.sort_unstable();
        eval_pos.sort_unstable();
        let fit_bb: Vec<usize> = fit_pos.iter().map(|&i| blackbox[i]).collect();
        let eval_bb: Vec<usize> = eval_pos.iter().map(|&i| blackbox[i]).collect();
        let fit_data = test.subset(&fit_pos)?.with_labels(fit_bb)?;
        let eval_data = test.subset(&eval_pos)?;
        (fit_data, eval_data, eval_bb)
    } else {
        let fit_data = test.with_labels(blackbox.clone())?;
        (fit_data, test, blackbox)
    };

    let matrix = match fixed_matrix {
        Some(m) => m.clone(),
        None => default_matrix_for(&fit_data)?,
    };
    let mut records = Vec::new();
    let mut rule_sets = Vec::new();
    for &method in &config.methods {
        let tree = fit_method(method, &fit_data, &matrix, config)?;
        let rules = extract(&tree)?;
        let (n_rules, avg_len) = rules.size_metrics()?;
        let record = MetricRecord {
            method: method.name().to_string(),
            dataset: dataset_name.to_string(),
            run,
            seed,
            completeness: completeness(&rules, &eval_data)?,
            correctness: correctness(&rules, &eval_data)?,
            fidelity: fidelity(&rules, &eval_data, &eval_blackbox)?,
            robustness: robustness(
                &rules,
                &eval_data,
                config.noise_sigma,
                &scales,
                robustness_seed(seed),
            )?,
            n_rules,
            avg_rule_length: avg_len,
            avg_rule_length_raw: rules.raw_average_length()?,
            noise_sigma: config.noise_sigma,
        };
        let text = rules.render();
        records.push(record);
        rule_sets.push(RuleSetRecord {
            method: method.name().to_string(),
            run,
            rules,
            text,
        });
    }
    Ok(RunOutput { records, rule_sets })
}

/// Runs the whole experiment and assembles the report. Pure with respect to
/// the filesystem apart from reading inputs; [`render_report`] writes files.
pub fn run_experiment(config: &RunConfig) -> Result<EvaluationReport> {
    config.validate()?;
    let raw = load_csv(&config.data_path, &config.target)?;
    let data = encode(&raw)?;
    // A matrix file is fixed across runs; the default matrix is rebuilt per
    // run from the labels the surrogate is fit to.
    let fixed_matrix = match &config.cost_matrix {
        CostSource::Default => None,
        CostSource::File(path) => {
            let m = CostMatrix::load(path)?;
            m.ensure_classes(data.n_classes())?;
            Some(m)
        }
    };
    let dataset_name = config.resolved_dataset_name();

    // A prediction file is row-aligned with the full dataset; per-run test
    // subsets index into it. A subprocess oracle is called per run instead.
    let file_predictions: Option<Vec<usize>> = match &config.predictor {
        PredictorSource::PredictionFile { .. } => {
            Some(get_predictions(&config.predictor, &data)?)
        }
        PredictorSource::SubprocessOracle { .. } => None,
    };

    let run_one = |run: usize| {
        run_once(
            run,
            config,
            &data,
            fixed_matrix.as_ref(),
            file_predictions.as_deref(),
            &dataset_name,
        )
        .map_err(|e| with_run_context(e, run))
    };

    let outputs: Vec<RunOutput> = if config.parallelism > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.parallelism)
            .build()
            .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
        pool.install(|| {
            (0..config.repeats)
                .into_par_iter()
                .map(run_one)
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        (0..config.repeats).map(run_one).collect::<Result<_>>()?
    };

    let mut records = Vec::new();
    let mut rule_sets = Vec::new();
    for output in outputs {
        records.extend(output.records);
        rule_sets.extend(output.rule_sets);
    }

    let methods: Vec<String> = config.methods.iter().map(|m| m.name().to_string()).collect();
    let report = assemble_report(config.clone(), dataset_name, methods, records, rule_sets)?;
    Ok(report)
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

fn assemble_report(
    config: RunConfig,
    dataset: String,
    methods: Vec<String>,
    records: Vec<MetricRecord>,
    rule_sets: Vec<RuleSetRecord>,
) -> Result<EvaluationReport> {
    let alpha = config.alpha;
    let n_runs = config.repeats;
    let mut summaries = Vec::new();
    let mut friedman_sections = Vec::new();
    let mut wilcoxon_sections = Vec::new();
    let mut rank_sections = Vec::new();
    let mut overall: Vec<f64> = vec![0.0; methods.len()];

    let values_for = |metric: &str, method: &str| -> Vec<f64> {
        let mut rows: Vec<(usize, f64)> = records
            .iter()
            .filter(|r| r.method == method)
            .filter_map(|r| r.value(metric).map(|v| (r.run, v)))
            .collect();
        rows.sort_by_key(|(run, _)| *run);
        rows.into_iter().map(|(_, v)| v).collect()
    };

    for (metric, higher_better) in METRIC_DIRECTIONS {
        let direction = if higher_better {
            Direction::HigherBetter
        } else {
            Direction::LowerBetter
        };
        let per_method: Vec<Vec<f64>> = methods.iter().map(|m| values_for(metric, m)).collect();

        for (method, values) in methods.iter().zip(per_method.iter()) {
            let (mean, std) = mean_std(values);
            summaries.push(MetricSummary {
                metric: metric.to_string(),
                method: method.clone(),
                mean,
                std,
            });
        }

        // Friedman across methods, blocks = runs.
        if methods.len() < 2 {
            friedman_sections.push(FriedmanSection {
                metric: metric.to_string(),
                test: None,
                note: Some("insufficient methods: need >= 2".into()),
            });
        } else if n_runs < 2 {
            friedman_sections.push(FriedmanSection {
                metric: metric.to_string(),
                test: None,
                note: Some("insufficient blocks: need >= 2 runs".into()),
            });
        } else {
            let blocks: Vec<Vec<f64>> = (0..n_runs)
                .map(|run| per_method.iter().map(|v| v[run]).collect())
                .collect();
            let table = RankTable::new(methods.clone(), blocks, direction)?;
            friedman_sections.push(FriedmanSection {
                metric: metric.to_string(),
                test: Some(friedman(&table, alpha)?),
                note: None,
            });
        }

        // Pairwise Wilcoxon.
        for a in 0..methods.len() {
            for b in (a + 1)..methods.len() {
                let section = match wilcoxon(&per_method[a], &per_method[b], alpha) {
                    Ok(test) => WilcoxonSection {
                        metric: metric.to_string(),
                        method_a: methods[a].clone(),
                        method_b: methods[b].clone(),
                        test: Some(test),
                        note: None,
                    },
                    Err(Error::Config(msg)) => WilcoxonSection {
                        metric: metric.to_string(),
                        method_a: methods[a].clone(),
                        method_b: methods[b].clone(),
                        test: None,
                        note: Some(format!("insufficient blocks: {msg}")),
                    },
                    Err(e) => return Err(e),
                };
                wilcoxon_sections.push(section);
            }
        }

        // Normalized ranks.
        if methods.len() >= 2 {
            let normalized = rank_and_normalize(&per_method, direction)?;
            for (value, total) in normalized.iter().zip(overall.iter_mut()) {
                *total += value;
            }
            rank_sections.push(RankSection {
                metric: metric.to_string(),
                ranks: methods
                    .iter()
                    .zip(normalized.iter())
                    .map(|(m, &v)| MethodRank {
                        method: m.clone(),
                        normalized_rank: v,
                    })
                    .collect(),
            });
        }
    }

    let overall_ranks: Vec<MethodRank> = if methods.len() >= 2 {
        methods
            .iter()
            .zip(overall.iter())
            .map(|(m, total)| MethodRank {
                method: m.clone(),
                normalized_rank: total / METRIC_DIRECTIONS.len() as f64,
            })
            .collect()
    } else {
        Vec::new()
    };

    Ok(EvaluationReport {
        config,
        dataset,
        methods,
        records,
        summaries,
        friedman: friedman_sections,
        wilcoxon: wilcoxon_sections,
        normalized_ranks: rank_sections,
        overall_ranks,
        rule_sets,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes the report in the selected formats plus per-run rule files.
/// Returns the paths written. Output is byte-identical across reruns of the
/// same experiment.
pub fn render_report(
    report: &EvaluationReport,
    formats: &[ReportFormat],
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();

    if formats.contains(&ReportFormat::Json) {
        let path = out_dir.join("report.json");
        write_file(&path, &(report.to_json()? + "\n"))?;
        written.push(path);
    }
    if formats.contains(&ReportFormat::Csv) {
        let path = out_dir.join("records.csv");
        write_file(&path, &render_csv(report))?;
        written.push(path);
    }
    if formats.contains(&ReportFormat::Text) {
        let path = out_dir.join("report.txt");
        write_file(&path, &render_text(report))?;
        written.push(path);
    }

    let rules_dir = out_dir.join("rules");
    std::fs::create_dir_all(&rules_dir).map_err(|e| Error::io(&rules_dir, e))?;
    for record in &report.rule_sets {
        let path = rules_dir.join(format!("{}_run{:04}.rules", record.method, record.run));
        write_file(&path, &record.text)?;
        written.push(path);
    }
    Ok(written)
}

fn render_csv(report: &EvaluationReport) -> String {
    let mut out = String::new();
    out.push_str(
        "method,dataset,run,seed,completeness,correctness,fidelity,robustness,\
         n_rules,avg_rule_length,avg_rule_length_raw,noise_sigma\n",
    );
    for r in &report.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.method,
            r.dataset,
            r.run,
            r.seed,
            r.completeness,
            r.correctness,
            r.fidelity,
            r.robustness,
            r.n_rules,
            r.avg_rule_length,
            r.avg_rule_length_raw,
            r.noise_sigma
        ));
    }
    out.push('\n');
    out.push_str("metric,method,mean,std\n");
    for s in &report.summaries {
        out.push_str(&format!("{},{},{},{}\n", s.metric, s.method, s.mean, s.std));
    }
    out
}

fn cell(mean: f64, std: f64) -> String {
    format!("{mean:.4} ({std:.4})")
}

fn render_text(report: &EvaluationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("Evaluation report: {}\n", report.dataset));
    out.push_str(&format!("Methods: {}\n", report.methods.join(", ")));
    out.push_str(&format!(
        "Runs: {} (seeds {}..{})\n",
        report.config.repeats,
        report.config.base_seed,
        report.config.base_seed + report.config.repeats as u64 - 1
    ));
    out.push_str(&format!("Noise sigma: {}\n\n", report.config.noise_sigma));

    let metric_width = METRIC_DIRECTIONS
        .iter()
        .map(|(m, _)| m.len())
        .max()
        .unwrap_or(10)
        .max("metric".len());
    let col_width = 18usize;

    out.push_str("Metric grid: mean (std) over runs\n");
    out.push_str(&format!("{:<metric_width$}", "metric"));
    for method in &report.methods {
        out.push_str(&format!(" | {method:<col_width$}"));
    }
    out.push('\n');
    for (metric, _) in METRIC_DIRECTIONS {
        out.push_str(&format!("{metric:<metric_width$}"));
        for method in &report.methods {
            let summary = report
                .summaries
                .iter()
                .find(|s| s.metric == metric && &s.method == method);
            let text = summary.map(|s| cell(s.mean, s.std)).unwrap_or_default();
            out.push_str(&format!(" | {text:<col_width$}"));
        }
        out.push('\n');
    }

    out.push_str(&format!("\nFriedman test (alpha {})\n", report.config.alpha));
    for section in &report.friedman {
        match (&section.test, &section.note) {
            (Some(test), _) => out.push_str(&format!(
                "{:<metric_width$} chi2={:.4} p={:.6} reject={}\n",
                section.metric, test.statistic, test.p_value, test.reject
            )),
            (None, Some(note)) => {
                out.push_str(&format!("{:<metric_width$} {note}\n", section.metric))
            }
            (None, None) => {}
        }
    }

    out.push_str(&format!(
        "\nWilcoxon signed-rank test (alpha {})\n",
        report.config.alpha
    ));
    for section in &report.wilcoxon {
        let pair = format!("{} vs {}", section.method_a, section.method_b);
        match (&section.test, &section.note) {
            (Some(test), _) => out.push_str(&format!(
                "{:<metric_width$} {pair}: W={:.1} p={:.6} reject={}\n",
                section.metric, test.statistic, test.p_value, test.reject
            )),
            (None, Some(note)) => {
                out.push_str(&format!("{:<metric_width$} {pair}: {note}\n", section.metric))
            }
            (None, None) => {}
        }
    }

    if !report.normalized_ranks.is_empty() {
        out.push_str("\nNormalized ranks (0 = best, 1 = worst)\n");
        for section in &report.normalized_ranks {
            let best = section
                .ranks
                .iter()
                .min_by(|a, b| a.normalized_rank.total_cmp(&b.normalized_rank));
            let worst = section
                .ranks
                .iter()
                .max_by(|a, b| a.normalized_rank.total_cmp(&b.normalized_rank));
            let cells: Vec<String> = section
                .ranks
                .iter()
                .map(|r| format!("{}={:.4}", r.method, r.normalized_rank))
                .collect();
            out.push_str(&format!(
                "{:<metric_width$} {}   best={} worst={}\n",
                section.metric,
                cells.join(" "),
                best.map(|r| r.method.as_str()).unwrap_or("-"),
                worst.map(|r| r.method.as_str()).unwrap_or("-"),
            ));
        }
        out.push_str("\nOverall (mean of normalized ranks across metrics)\n");
        for rank in &report.overall_ranks {
            out.push_str(&format!("{}={:.4}\n", rank.method, rank.normalized_rank));
        }
    }
    out
}

/// Convenience wrapper used by the CLI: run, then write every requested
/// format into the configured output directory.
pub fn run_and_render(config: &RunConfig) -> Result<(EvaluationReport, Vec<PathBuf>)> {
    let report = run_experiment(config)?;
    let written = render_report(&report, &config.formats, &config.output_dir)?;
    Ok((report, written))
}
