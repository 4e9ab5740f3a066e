mod config;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use iec::benchmark::{run_benchmark, BenchmarkConfig};
use iec::dataset::{load_csv, load_csv_with_schema, write_csv, SynthConfig};
use iec::metrics::{confusion, report, report_table, ConfusionMatrix, MetricsReport};
use iec::{ensemble, Dataset, IecModel, TrainConfig, TreeConfig};

use config::Config;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments; exit code 2.
    Usage(String),
    /// Anything that fails while running; exit code 1.
    Runtime(String),
}

impl From<iec::Error> for CliError {
    fn from(e: iec::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn usage_unless(cond: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Usage(msg()))
    }
}

#[derive(Parser)]
#[command(name = "iec", version, about = "Hellinger tree + neural network ensemble for imbalanced binary data")]
struct Cli {
    /// Config file (JSON object or key=value lines); flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic imbalanced dataset as CSV.
    Synth(SynthArgs),
    /// Fit the ensemble on a CSV file and save the model.
    Train(TrainArgs),
    /// Score a saved model (or a constant baseline) on a CSV file.
    Evaluate(EvaluateArgs),
    /// Compare ANN-only, HDDT and IEC over repeated stratified splits.
    Benchmark(BenchmarkArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Table,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected table or json)")),
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    /// Number of rows [default: 1000]
    #[arg(long)]
    n: Option<usize>,
    /// Columns shifted for the positive class [default: 5]
    #[arg(long)]
    informative: Option<usize>,
    /// Pure noise columns [default: 5]
    #[arg(long)]
    noise: Option<usize>,
    /// Fraction of positive (label 1) rows, in (0, 0.5) [default: 0.2]
    #[arg(long)]
    minority: Option<f64>,
    /// Random seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DataArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Name of the label column [default: class]
    #[arg(long)]
    label_col: Option<String>,
    /// Label value treated as the positive (minority) class [default: 1]
    #[arg(long)]
    positive: Option<String>,
    /// Comma-separated categorical column names.
    #[arg(long, value_delimiter = ',')]
    categorical: Vec<String>,
    /// Output style [default: table]
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct FitArgs {
    /// Random seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Gradient descent epochs [default: 2000]
    #[arg(long)]
    epochs: Option<usize>,
    /// Gradient descent step size [default: 0.3]
    #[arg(long)]
    learning_rate: Option<f64>,
    /// Initial weights drawn from U(-s, s) [default: 0.5]
    #[arg(long)]
    init_scale: Option<f64>,
    /// Smallest allowed child node [default: 1]
    #[arg(long)]
    min_leaf: Option<usize>,
    /// Depth limit for the tree; unlimited when omitted.
    #[arg(long)]
    max_depth: Option<usize>,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    fit: FitArgs,
    /// Where to write the model JSON.
    #[arg(long)]
    model: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum Baseline {
    /// Predict the negative class for every row.
    Constant0,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, required_unless_present = "baseline", conflicts_with = "baseline")]
    model: Option<PathBuf>,
    #[arg(long, value_enum)]
    baseline: Option<Baseline>,
}

#[derive(Args)]
struct BenchmarkArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    fit: FitArgs,
    /// Number of stratified splits [default: 5]
    #[arg(long)]
    repetitions: Option<usize>,
    /// Share of each class used for training [default: 0.7]
    #[arg(long)]
    train_fraction: Option<f64>,
    /// Write every fold's confusion matrix and metrics as JSON.
    #[arg(long)]
    dump_folds: Option<PathBuf>,
}

struct DataSource {
    path: PathBuf,
    label_col: String,
    positive: String,
    categorical: Vec<String>,
    format: Format,
}

impl DataSource {
    fn resolve(args: DataArgs, cfg: &Config) -> Result<Self, CliError> {
        Ok(DataSource {
            path: args.data,
            label_col: cfg.resolve("label-col", args.label_col, "class".to_owned())?,
            positive: cfg.resolve("positive", args.positive, "1".to_owned())?,
            categorical: cfg.resolve_list("categorical", args.categorical),
            format: cfg.resolve("format", args.format, Format::Table)?,
        })
    }

    fn load(&self) -> Result<Dataset, CliError> {
        let cats: Vec<&str> = self.categorical.iter().map(String::as_str).collect();
        Ok(load_csv(&self.path, &self.label_col, &self.positive, &cats)?)
    }
}

fn resolve_fit(args: FitArgs, cfg: &Config) -> Result<(TreeConfig, TrainConfig), CliError> {
    let defaults = TrainConfig::default();
    let net = TrainConfig {
        epochs: cfg.resolve("epochs", args.epochs, defaults.epochs)?,
        learning_rate: cfg.resolve("learning-rate", args.learning_rate, defaults.learning_rate)?,
        seed: cfg.resolve("seed", args.seed, defaults.seed)?,
        init_scale: cfg.resolve("init-scale", args.init_scale, defaults.init_scale)?,
    };
    let tree = TreeConfig {
        min_leaf: cfg.resolve("min-leaf", args.min_leaf, 1)?,
        max_depth: cfg.resolve_opt("max-depth", args.max_depth)?,
    };
    usage_unless(net.epochs >= 1, || "--epochs must be at least 1".into())?;
    usage_unless(net.learning_rate.is_finite() && net.learning_rate > 0.0, || {
        format!("--learning-rate must be positive, got {}", net.learning_rate)
    })?;
    usage_unless(net.init_scale.is_finite() && net.init_scale > 0.0, || {
        format!("--init-scale must be positive, got {}", net.init_scale)
    })?;
    usage_unless(tree.min_leaf >= 1, || "--min-leaf must be at least 1".into())?;
    Ok((tree, net))
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    let result = match path {
        Some(p) => fs::write(p, bytes),
        None => io::stdout().write_all(bytes),
    };
    result.map_err(|e| CliError::Runtime(format!("write failed: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn cmd_synth(args: SynthArgs, cfg: &Config) -> Result<(), CliError> {
    let mut synth = SynthConfig::new(
        cfg.resolve("n", args.n, 1000)?,
        cfg.resolve("informative", args.informative, 5)?,
        cfg.resolve("noise", args.noise, 5)?,
        cfg.resolve("minority", args.minority, 0.2)?,
        cfg.resolve("seed", args.seed, 0)?,
    );
    synth.shift = SynthConfig::DEFAULT_SHIFT;
    usage_unless(synth.n >= 10, || format!("--n must be at least 10, got {}", synth.n))?;
    usage_unless(synth.minority_fraction > 0.0 && synth.minority_fraction < 0.5, || {
        format!("--minority must lie in (0, 0.5), got {}", synth.minority_fraction)
    })?;
    usage_unless(synth.informative + synth.noise > 0, || {
        "--informative plus --noise must be at least 1".into()
    })?;
    let out: Option<PathBuf> = cfg.resolve_opt("out", args.out)?;
    let d = synth.generate().map_err(|e| CliError::Usage(e.to_string()))?;
    let mut buf = Vec::new();
    write_csv(&d, &mut buf, "class")?;
    write_output(out.as_deref(), &buf)
}

#[derive(Serialize)]
struct TrainSummary<'a> {
    n_train: usize,
    selected_features: Vec<&'a str>,
    d_m: usize,
    hidden_count: usize,
    training: MetricsReport,
}

fn cmd_train(args: TrainArgs, cfg: &Config) -> Result<(), CliError> {
    let source = DataSource::resolve(args.data, cfg)?;
    let (tree, net) = resolve_fit(args.fit, cfg)?;
    let data = source.load()?;
    let model = ensemble::fit(&data, tree, &net)?;
    fs::write(&args.model, model.to_json()?)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", args.model.display())))?;
    let predicted = model.predict(&data)?;
    let summary = TrainSummary {
        n_train: data.n(),
        selected_features: model
            .selected_features
            .iter()
            .map(|&f| data.specs()[f].name.as_str())
            .collect(),
        d_m: model.d_m,
        hidden_count: model.hidden_count(),
        training: report(&confusion(&predicted, data.labels())?),
    };
    let text = match source.format {
        Format::Json => to_json(&summary),
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "n_train       {}", summary.n_train);
            let _ = writeln!(s, "selected      {}", summary.selected_features.join(", "));
            let _ = writeln!(s, "d_m           {}", summary.d_m);
            let _ = writeln!(s, "hidden_count  {}", summary.hidden_count);
            let _ = writeln!(s, "\ntraining metrics");
            s.push_str(&report_table(&summary.training));
            s
        }
    };
    write_output(None, text.as_bytes())
}

#[derive(Serialize)]
struct Evaluation {
    confusion: ConfusionMatrix,
    report: MetricsReport,
    /// Metrics reported as 0 because their denominator is zero.
    undefined: Vec<&'static str>,
}

fn cmd_evaluate(args: EvaluateArgs, cfg: &Config) -> Result<(), CliError> {
    let source = DataSource::resolve(args.data, cfg)?;
    let (data, predicted) = match (args.model, args.baseline) {
        (Some(path), _) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
            let model = IecModel::from_json(&text)?;
            let data =
                load_csv_with_schema(&source.path, &source.label_col, &source.positive, &model.tree.specs)?;
            let predicted = model.predict(&data)?;
            (data, predicted)
        }
        (None, Some(Baseline::Constant0)) => {
            let data = source.load()?;
            let predicted = iec::baseline::constant_negative(&data);
            (data, predicted)
        }
        (None, None) => return Err(CliError::Usage("either --model or --baseline is required".into())),
    };
    let cm = confusion(&predicted, data.labels())?;
    let eval = Evaluation {
        confusion: cm,
        report: report(&cm),
        undefined: cm.undefined_metrics(),
    };
    let text = match source.format {
        Format::Json => to_json(&eval),
        Format::Table => {
            let mut s = format!(
                "tp {}  fp {}  tn {}  fn {}\n",
                cm.tp, cm.fp, cm.tn, cm.fn_
            );
            s.push_str(&report_table(&eval.report));
            if !eval.undefined.is_empty() {
                let _ = writeln!(s, "zero denominator (reported as 0): {}", eval.undefined.join(", "));
            }
            s
        }
    };
    write_output(None, text.as_bytes())
}

fn cmd_benchmark(args: BenchmarkArgs, cfg: &Config) -> Result<(), CliError> {
    let source = DataSource::resolve(args.data, cfg)?;
    let (tree, net) = resolve_fit(args.fit, cfg)?;
    let config = BenchmarkConfig {
        repetitions: cfg.resolve("repetitions", args.repetitions, iec::dataset::DEFAULT_REPETITIONS)?,
        train_fraction: cfg.resolve(
            "train-fraction",
            args.train_fraction,
            iec::dataset::DEFAULT_TRAIN_FRACTION,
        )?,
        seed: net.seed,
        tree,
        net,
    };
    usage_unless(config.repetitions >= 1, || "--repetitions must be at least 1".into())?;
    usage_unless(config.train_fraction > 0.0 && config.train_fraction < 1.0, || {
        format!("--train-fraction must lie in (0, 1), got {}", config.train_fraction)
    })?;
    let dump: Option<PathBuf> = cfg.resolve_opt("dump-folds", args.dump_folds)?;
    let data = source.load()?;
    let result = run_benchmark(&data, &config)?;
    if let Some(path) = dump {
        write_output(Some(&path), to_json(&result.folds).as_bytes())?;
    }
    let text = match source.format {
        Format::Json => to_json(&result.summary),
        Format::Table => result.table(),
    };
    write_output(None, text.as_bytes())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Synth(a) => cmd_synth(a, &cfg),
        Command::Train(a) => cmd_train(a, &cfg),
        Command::Evaluate(a) => cmd_evaluate(a, &cfg),
        Command::Benchmark(a) => cmd_benchmark(a, &cfg),
    }
}

fn main() -> ExitCode {
    // clap exits with code 2 on its own usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
