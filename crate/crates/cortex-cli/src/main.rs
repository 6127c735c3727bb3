//! `cortex` — run the surrogate rule-extraction experiment end to end:
//! load a CSV dataset, repeatedly split it, label the held-out portion with
//! a black-box predictor, fit cost-sensitive and weighted-Gini surrogate
//! trees, extract IF-THEN rules, score six explainability metrics, and write
//! JSON/CSV/text reports with Friedman, Wilcoxon, and rank statistics.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error,
//! 3 oracle error, 4 internal consistency error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cortex_core::blackbox::PredictorSource;
use cortex_core::error::Error;
use cortex_core::experiment::{run_and_render, CostSource, Method, ReportFormat, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "cortex",
    version,
    about = "Cost-sensitive surrogate trees, rule extraction, and evaluation",
    after_help = "Cost matrix convention: entry [i][j] is the cost of predicting class j \
                  when the actual class is i (row = actual, column = predicted). Matrix \
                  files are headerless KxK CSVs with rows in lexicographic class order."
)]
struct Cli {
    /// Dataset CSV (UTF-8, header row, '.' decimals).
    #[arg(long)]
    data: Option<PathBuf>,

    /// Name of the target column in the dataset.
    #[arg(long)]
    target: Option<String>,

    /// CSV of black-box predictions, row-aligned with the dataset. Mutually
    /// exclusive with --oracle-cmd.
    #[arg(long, conflicts_with = "oracle_cmd")]
    predictions: Option<PathBuf>,

    /// Column in the predictions file holding class names.
    #[arg(long, default_value = "prediction")]
    predictions_column: String,

    /// Shell command for a subprocess oracle: reads a feature CSV on stdin,
    /// writes one class name per row on stdout.
    #[arg(long)]
    oracle_cmd: Option<String>,

    /// Oracle timeout in seconds.
    #[arg(long, default_value_t = 120)]
    oracle_timeout: u64,

    /// `default` builds the matrix from class counts; a path loads a KxK CSV.
    #[arg(long)]
    cost_matrix: Option<String>,

    /// Fraction of rows in the (black-box) training partition.
    #[arg(long)]
    train_fraction: Option<f64>,

    /// Number of repeated randomized runs.
    #[arg(long)]
    repeats: Option<usize>,

    /// Base seed; run r uses seed base+r.
    #[arg(long)]
    seed: Option<u64>,

    /// Gaussian noise level for the robustness metric.
    #[arg(long)]
    noise_sigma: Option<f64>,

    /// Maximum tree depth for both methods.
    #[arg(long)]
    max_depth: Option<usize>,

    /// Minimum samples per leaf for both methods.
    #[arg(long)]
    min_leaf: Option<usize>,

    /// Comma-separated subset of {cortex,dt}.
    #[arg(long)]
    methods: Option<String>,

    /// Output directory for reports and rule files.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Concurrent runs.
    #[arg(long)]
    parallel: Option<usize>,

    /// Comma-separated subset of {json,csv,text}.
    #[arg(long)]
    format: Option<String>,

    /// Disable stratified splitting.
    #[arg(long)]
    no_stratify: bool,

    /// Evaluate on a half of the held-out portion that the surrogate never
    /// saw, instead of the fit set.
    #[arg(long)]
    eval_holdout: bool,

    /// Significance level for the statistical tests.
    #[arg(long)]
    alpha: Option<f64>,

    /// JSON config file mirroring the run configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Write the one-hot encoded dataset to this CSV and exit.
    #[arg(long)]
    dump_encoded: Option<PathBuf>,
}

fn build_config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => {
            let data = cli
                .data
                .clone()
                .ok_or_else(|| Error::Config("--data is required (or use --config)".into()))?;
            let target = cli
                .target
                .clone()
                .ok_or_else(|| Error::Config("--target is required (or use --config)".into()))?;
            let predictor = predictor_from_flags(cli)?.ok_or_else(|| {
                Error::Config("one of --predictions or --oracle-cmd is required".into())
            })?;
            RunConfig::new(data, &target, predictor)
        }
    };

    if cli.config.is_some() {
        if let Some(data) = &cli.data {
            config.data_path = data.clone();
        }
        if let Some(target) = &cli.target {
            config.target = target.clone();
        }
        if let Some(predictor) = predictor_from_flags(cli)? {
            config.predictor = predictor;
        }
    }
    if let Some(choice) = &cli.cost_matrix {
        config.cost_matrix = if choice == "default" {
            CostSource::Default
        } else {
            CostSource::File(PathBuf::from(choice))
        };
    }
    if let Some(f) = cli.train_fraction {
        config.train_fraction = f;
    }
    if let Some(r) = cli.repeats {
        config.repeats = r;
    }
    if let Some(s) = cli.seed {
        config.base_seed = s;
    }
    if let Some(sigma) = cli.noise_sigma {
        config.noise_sigma = sigma;
    }
    if let Some(depth) = cli.max_depth {
        config.cortex_params.max_depth = depth;
        config.dt_params.max_depth = depth;
    }
    if let Some(leaf) = cli.min_leaf {
        config.cortex_params.min_samples_leaf = leaf;
        config.dt_params.min_samples_leaf = leaf;
    }
    if let Some(methods) = &cli.methods {
        config.methods = methods
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(Method::parse)
            .collect::<Result<_, _>>()?;
    }
    if let Some(out) = &cli.out {
        config.output_dir = out.clone();
    }
    if let Some(parallel) = cli.parallel {
        config.parallelism = parallel;
    }
    if let Some(formats) = &cli.format {
        config.formats = formats
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(ReportFormat::parse)
            .collect::<Result<_, _>>()?;
    }
    if cli.no_stratify {
        config.stratified = false;
    }
    if cli.eval_holdout {
        config.eval_holdout = true;
    }
    if let Some(alpha) = cli.alpha {
        config.alpha = alpha;
    }
    Ok(config)
}

fn predictor_from_flags(cli: &Cli) -> Result<Option<PredictorSource>, Error> {
    if let Some(path) = &cli.predictions {
        return Ok(Some(PredictorSource::PredictionFile {
            path: path.clone(),
            label_column: cli.predictions_column.clone(),
        }));
    }
    if let Some(command) = &cli.oracle_cmd {
        return Ok(Some(PredictorSource::SubprocessOracle {
            command: command.clone(),
            workdir: None,
            timeout_secs: cli.oracle_timeout,
        }));
    }
    Ok(None)
}

fn dump_encoded(cli: &Cli, path: &PathBuf) -> Result<(), Error> {
    let data = cli
        .data
        .clone()
        .ok_or_else(|| Error::Config("--data is required with --dump-encoded".into()))?;
    let target = cli
        .target
        .clone()
        .ok_or_else(|| Error::Config("--target is required with --dump-encoded".into()))?;
    let raw = cortex_core::dataset::load_csv(&data, &target)?;
    let encoded = cortex_core::dataset::encode(&raw)?;
    let file = std::fs::File::create(path)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", path.display())))?;
    encoded.write_csv(std::io::BufWriter::new(file))?;
    eprintln!(
        "encoded {} rows x {} features -> {}",
        encoded.n_rows(),
        encoded.n_features(),
        path.display()
    );
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Error> {
    if let Some(path) = &cli.dump_encoded {
        return dump_encoded(cli, path);
    }
    let config = build_config(cli)?;
    let (report, written) = run_and_render(&config)?;
    eprintln!(
        "{}: {} runs x {} methods, {} records",
        report.dataset,
        config.repeats,
        report.methods.len(),
        report.records.len()
    );
    for summary in &report.summaries {
        eprintln!(
            "  {:<16} {:<8} {:.4} ({:.4})",
            summary.metric, summary.method, summary.mean, summary.std
        );
    }
    for path in written.iter().take(3) {
        eprintln!("wrote {}", path.display());
    }
    if written.len() > 3 {
        eprintln!("wrote {} rule files under {}", written.len() - 3, config.output_dir.join("rules").display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
