//! The `uqbench` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime failure. Every artifact
//! `<out>` gets a `<out>.manifest.json` beside it; `eval` without `--out`
//! prints its manifest to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::data::{
    self, generate, DatasetKind, LabeledSet, Split, DEFAULT_TEST_SIZE, DEFAULT_TRAIN_SIZE,
};
use crate::error::Error;
use crate::harness::{self, RunManifest, BIAS_REPLICATES};
use crate::metrics::{
    evaluate, CalibrationConfig, EvalConfig, ReportRow, SparsificationConfig, TieMode, WeightMode,
};
use crate::predictors::{
    evaluation_records, log_density_grid, train_ensemble, Ensemble, OraclePredictor, Predictor,
    TrainConfig,
};
use crate::rng::{derive_seed, Seed};

#[derive(Parser, Debug)]
#[command(
    name = "uqbench",
    version,
    about = "Uncertainty-quantification metrics for regression"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a synthetic dataset as `x,y` CSV
    Generate(GenerateArgs),
    /// Train a deep ensemble and save it
    Train(TrainArgs),
    /// Print `dataset,predictor,ause,ce,spearman,nll` for one test set
    Eval(EvalArgs),
    /// Metrics on nested subsets of one large test set
    Stability(StabilityArgs),
    /// Replicate-averaged metrics per test-set size
    Bias(BiasArgs),
    /// Sparsification curves as `fraction,oracle,sparsification`
    Sparsify(SparsifyArgs),
    /// Predictive log density on a grid as `x,y,z`
    DensityGrid(GridArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DatasetArg {
    Homoscedastic,
    Heteroscedastic,
    Multimodal,
    Epistemic,
}

impl From<DatasetArg> for DatasetKind {
    fn from(d: DatasetArg) -> Self {
        match d {
            DatasetArg::Homoscedastic => DatasetKind::Homoscedastic,
            DatasetArg::Heteroscedastic => DatasetKind::Heteroscedastic,
            DatasetArg::Multimodal => DatasetKind::Multimodal,
            DatasetArg::Epistemic => DatasetKind::Epistemic,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SplitArg {
    Train,
    Test,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PredictorArg {
    Ensemble,
    Oracle,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WeightsArg {
    /// w_j = p_hat_j / N
    #[value(name = "paper")]
    Frequency,
    Uniform,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TieArg {
    /// tied values share the lowest rank
    #[value(name = "paper")]
    Min,
    Average,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    dataset: DatasetArg,
    #[arg(long, value_enum, default_value = "test")]
    split: SplitArg,
    #[arg(long, default_value_t = DEFAULT_TEST_SIZE)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[arg(long, value_enum)]
    dataset: DatasetArg,
    /// Training-set size (generated with --seed)
    #[arg(long, default_value_t = DEFAULT_TRAIN_SIZE)]
    n: usize,
    /// Train on this `x,y` CSV instead of a generated set
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the model
    #[arg(long)]
    model_path: PathBuf,
    #[arg(long, default_value_t = 20)]
    epochs: usize,
    #[arg(long, default_value_t = 128)]
    batch_size: usize,
    #[arg(long, default_value_t = 1e-3)]
    learning_rate: f64,
    #[arg(long, default_value_t = 5)]
    ensemble_size: usize,
    #[arg(long, default_value_t = crate::predictors::mlp::DEFAULT_HIDDEN)]
    hidden: usize,
}

#[derive(Args, Debug)]
struct PredictorArgs {
    #[arg(long, value_enum, default_value = "ensemble")]
    predictor: PredictorArg,
    /// Trained ensemble (required with `--predictor ensemble`)
    #[arg(long)]
    model_path: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MetricArgs {
    /// Number of evenly spaced calibration thresholds
    #[arg(long = "thresholds", default_value_t = CalibrationConfig::DEFAULT_THRESHOLDS)]
    thresholds: usize,
    #[arg(long, value_enum, default_value = "paper")]
    weights: WeightsArg,
    #[arg(long, value_enum, default_value = "paper")]
    tie_mode: TieArg,
    /// Sparsification grid size (default: one step per sample)
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    predictor: PredictorArgs,
    #[arg(long, value_enum)]
    dataset: DatasetArg,
    #[arg(long, default_value_t = DEFAULT_TEST_SIZE)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluate on this `x,y` CSV instead of a generated test set
    #[arg(long)]
    data: Option<PathBuf>,
    /// Also write the report CSV here
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    metrics: MetricArgs,
}

#[derive(Args, Debug)]
struct StabilityArgs {
    #[command(flatten)]
    predictor: PredictorArgs,
    #[arg(long, value_enum, default_value = "heteroscedastic")]
    dataset: DatasetArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    metrics: MetricArgs,
}

#[derive(Args, Debug)]
struct BiasArgs {
    #[command(flatten)]
    study: StabilityArgs,
    #[arg(long, default_value_t = BIAS_REPLICATES)]
    replicates: usize,
}

#[derive(Args, Debug)]
struct SparsifyArgs {
    #[command(flatten)]
    predictor: PredictorArgs,
    #[arg(long, value_enum)]
    dataset: DatasetArg,
    #[arg(long, default_value_t = DEFAULT_TEST_SIZE)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of removal fractions (default: one per sample)
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[command(flatten)]
    predictor: PredictorArgs,
    #[arg(long, value_enum)]
    dataset: DatasetArg,
    #[arg(long, default_value_t = 100)]
    nx: usize,
    #[arg(long, default_value_t = 100)]
    ny: usize,
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y_max: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let argv: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match dispatch(cli.command, argv) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(command: Command, argv: Vec<String>) -> CliResult {
    match command {
        Command::Generate(a) => cmd_generate(a, argv),
        Command::Train(a) => cmd_train(a, argv),
        Command::Eval(a) => cmd_eval(a, argv),
        Command::Stability(a) => cmd_stability(a, argv),
        Command::Bias(a) => cmd_bias(a, argv),
        Command::Sparsify(a) => cmd_sparsify(a, argv),
        Command::DensityGrid(a) => cmd_density_grid(a, argv),
    }
}

fn load_predictor(args: &PredictorArgs, kind: DatasetKind) -> CliResult<Box<dyn Predictor>> {
    match args.predictor {
        PredictorArg::Oracle => Ok(Box::new(OraclePredictor::new(kind))),
        PredictorArg::Ensemble => {
            let path = args.model_path.as_ref().ok_or_else(|| {
                Failure::Usage("--predictor ensemble requires --model-path".into())
            })?;
            Ok(Box::new(Ensemble::load(path)?))
        }
    }
}

fn eval_config(m: &MetricArgs, seed: Seed) -> CliResult<EvalConfig> {
    let weights = match m.weights {
        WeightsArg::Frequency => WeightMode::Frequency,
        WeightsArg::Uniform => WeightMode::Uniform,
    };
    let calibration = CalibrationConfig::evenly_spaced(m.thresholds, weights)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(EvalConfig {
        sparsification: SparsificationConfig {
            grid_size: m.grid,
            tie_seed: derive_seed(seed, &[0x5449_4553]),
        },
        calibration,
        tie_mode: match m.tie_mode {
            TieArg::Min => TieMode::Min,
            TieArg::Average => TieMode::Average,
        },
    })
}

fn write_manifest(manifest: &RunManifest, artifact: &Path) -> CliResult {
    manifest.write(&RunManifest::path_for(artifact))?;
    Ok(())
}

fn write_artifact(
    path: &Path,
    body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> CliResult {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    body(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

fn cmd_generate(a: GenerateArgs, argv: Vec<String>) -> CliResult {
    let kind = DatasetKind::from(a.dataset);
    let split = match a.split {
        SplitArg::Train => Split::Train,
        SplitArg::Test => Split::Test,
    };
    let set = generate(kind, split, a.n, Seed(a.seed));
    data::write_csv(&set, &a.out)?;

    #[derive(Serialize)]
    struct Config {
        split: Split,
        n: usize,
    }
    let manifest = RunManifest::new(
        "generate",
        argv,
        Seed(a.seed),
        Some(kind),
        None,
        &Config { split, n: a.n },
        vec![path_string(&a.out)],
    );
    write_manifest(&manifest, &a.out)
}

fn cmd_train(a: TrainArgs, argv: Vec<String>) -> CliResult {
    let kind = DatasetKind::from(a.dataset);
    let train: LabeledSet = match &a.data {
        Some(path) => data::read_csv(path)?,
        None => generate(kind, Split::Train, a.n, Seed(a.seed)),
    };
    let cfg = TrainConfig {
        epochs: a.epochs,
        batch_size: a.batch_size,
        learning_rate: a.learning_rate,
        ensemble_size: a.ensemble_size,
        hidden: a.hidden,
        seed: Seed(a.seed),
        ..TrainConfig::default()
    };
    let ensemble = train_ensemble(&train, &cfg).map_err(|e| match e {
        Error::InvalidArgument(m) => Failure::Usage(m),
        e => Failure::Runtime(e),
    })?;
    ensemble.save(&a.model_path)?;
    for (i, m) in ensemble.members.iter().enumerate() {
        log::info!(
            "member {i}: epoch-1 loss {:.5}, final loss {:.5}",
            m.epoch_losses[0],
            m.epoch_losses[m.epoch_losses.len() - 1]
        );
    }
    let manifest = RunManifest::new(
        "train",
        argv,
        Seed(a.seed),
        Some(kind),
        Some("ensemble".into()),
        &cfg,
        vec![path_string(&a.model_path)],
    );
    write_manifest(&manifest, &a.model_path)
}

fn cmd_eval(a: EvalArgs, argv: Vec<String>) -> CliResult {
    let kind = DatasetKind::from(a.dataset);
    let seed = Seed(a.seed);
    let predictor = load_predictor(&a.predictor, kind)?;
    let cfg = eval_config(&a.metrics, seed)?;
    let test = match &a.data {
        Some(path) => data::read_csv(path)?,
        None => generate(kind, Split::Test, a.n, seed),
    };
    let records = evaluation_records(&predictor, &test)?;
    let row = ReportRow {
        dataset: kind.to_string(),
        predictor: predictor.name(),
        report: evaluate(&records, &cfg)?,
    };
    println!("{}", ReportRow::CSV_HEADER);
    println!("{}", row.to_csv_line());

    let artifacts = a.out.iter().map(|p| path_string(p)).collect();
    let manifest = RunManifest::new(
        "eval",
        argv,
        seed,
        Some(kind),
        Some(predictor.name()),
        &cfg,
        artifacts,
    );
    match &a.out {
        Some(out) => {
            write_artifact(out, |w| {
                harness::write_table_csv(std::slice::from_ref(&row), w)
            })?;
            write_manifest(&manifest, out)
        }
        None => {
            eprintln!("{}", manifest.to_json());
            Ok(())
        }
    }
}

fn cmd_stability(a: StabilityArgs, argv: Vec<String>) -> CliResult {
    let kind = DatasetKind::from(a.dataset);
    let seed = Seed(a.seed);
    let predictor = load_predictor(&a.predictor, kind)?;
    let cfg = eval_config(&a.metrics, seed)?;
    let result = harness::convergence_experiment(&predictor, kind, seed, &cfg)?;
    result.write_csv(&a.out)?;
    let manifest = RunManifest::new(
        "stability",
        argv,
        seed,
        Some(kind),
        Some(predictor.name()),
        &cfg,
        vec![path_string(&a.out)],
    );
    write_manifest(&manifest, &a.out)
}

fn cmd_bias(a: BiasArgs, argv: Vec<String>) -> CliResult {
    let s = &a.study;
    let kind = DatasetKind::from(s.dataset);
    let seed = Seed(s.seed);
    if a.replicates == 0 {
        return Err(Failure::Usage("--replicates must be at least 1".into()));
    }
    let predictor = load_predictor(&s.predictor, kind)?;
    let cfg = eval_config(&s.metrics, seed)?;
    let result = harness::bias_experiment(&predictor, kind, seed, a.replicates, &cfg)?;
    result.write_csv(&s.out)?;

    #[derive(Serialize)]
    struct Config<'a> {
        replicates: usize,
        eval: &'a EvalConfig,
    }
    let manifest = RunManifest::new(
        "bias",
        argv,
        seed,
        Some(kind),
        Some(predictor.name()),
        &Config {
            replicates: a.replicates,
            eval: &cfg,
        },
        vec![path_string(&s.out)],
    );
    write_manifest(&manifest, &s.out)
}

fn cmd_sparsify(a: SparsifyArgs, argv: Vec<String>) -> CliResult {
    let kind = DatasetKind::from(a.dataset);
    let seed = Seed(a.seed);
    let predictor = load_predictor(&a.predictor, kind)?;
    let cfg = SparsificationConfig {
        grid_size: a.grid,
        tie_seed: derive_seed(seed, &[0x5449_4553]),
    };
    harness::sparsification_emit(&predictor, kind, seed, a.n, &cfg, &a.out).map_err(
        |e| match e {
            Error::InvalidArgument(m) => Failure::Usage(m),
            e => Failure::Runtime(e),
        },
    )?;

    #[derive(Serialize)]
    struct Config {
        n: usize,
        sparsification: SparsificationConfig,
    }
    let manifest = RunManifest::new(
        "sparsify",
        argv,
        seed,
        Some(kind),
        Some(predictor.name()),
        &Config {
            n: a.n,
            sparsification: cfg,
        },
        vec![path_string(&a.out)],
    );
    write_manifest(&manifest, &a.out)
}

fn default_y_range(kind: DatasetKind) -> (f64, f64) {
    match kind {
        DatasetKind::Homoscedastic | DatasetKind::Heteroscedastic => (-2.0, 2.0),
        DatasetKind::Multimodal | DatasetKind::Epistemic => (-1.0, 2.0),
    }
}

fn cmd_density_grid(a: GridArgs, argv: Vec<String>) -> CliResult {
    let kind = DatasetKind::from(a.dataset);
    let predictor = load_predictor(&a.predictor, kind)?;
    let (dx0, dx1) = kind.domain();
    let (dy0, dy1) = default_y_range(kind);
    let x_range = (a.x_min.unwrap_or(dx0), a.x_max.unwrap_or(dx1));
    let y_range = (a.y_min.unwrap_or(dy0), a.y_max.unwrap_or(dy1));
    let grid = log_density_grid(&predictor, x_range, y_range, a.nx, a.ny).map_err(|e| match e {
        Error::InvalidArgument(m) => Failure::Usage(m),
        e => Failure::Runtime(e),
    })?;
    grid.write_csv(&a.out)?;

    #[derive(Serialize)]
    struct Config {
        x_range: (f64, f64),
        y_range: (f64, f64),
        nx: usize,
        ny: usize,
    }
    let manifest = RunManifest::new(
        "density-grid",
        argv,
        Seed(0),
        Some(kind),
        Some(predictor.name()),
        &Config {
            x_range,
            y_range,
            nx: a.nx,
            ny: a.ny,
        },
        vec![path_string(&a.out)],
    );
    write_manifest(&manifest, &a.out)
}
