//! Command-line pipeline driver. All real work lives in the library; this
//! binary only resolves configuration (flag beats file beats default) and
//! dispatches to the stage commands.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lifexp::config::PipelineConfig;
use lifexp::pipeline::{
    cmd_cluster, cmd_explore, cmd_pipeline, cmd_preprocess, cmd_report, cmd_train, ModelChoice,
};

#[derive(Parser)]
#[command(
    name = "lifexp",
    version,
    about = "Reproducible life-expectancy modeling pipeline: cleaning, exploration, clustering, and interpretable regression models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; absent keys fall back to built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Raw input CSV.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Geocode lookup CSV (country,latitude,longitude).
    #[arg(long)]
    geocode: Option<PathBuf>,
    /// Consistency-rule JSON file.
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Output directory for clean.csv, report.json, and figures.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random seed for every stochastic stage.
    #[arg(long)]
    seed: Option<u64>,
    /// Target column name.
    #[arg(long)]
    target: Option<String>,
    /// Train fraction of the train/test split.
    #[arg(long)]
    split_ratio: Option<f64>,
    /// Largest cluster count evaluated by the selection sweep.
    #[arg(long)]
    k_max: Option<usize>,
    /// Histogram bin count for the explore stage.
    #[arg(long)]
    bins: Option<usize>,
    /// ANOVA run as `<numeric>:<categorical>`; repeatable.
    #[arg(long)]
    anova: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Clean the raw CSV into out/clean.csv and record stage counts.
    Preprocess(CommonArgs),
    /// Histograms, correlations, and ANOVA on the cleaned dataset.
    Explore(CommonArgs),
    /// Scaler x algorithm x k clustering sweep plus PCA projection.
    Cluster(CommonArgs),
    /// Fit models on a seeded split and record metrics and diagnostics.
    Train {
        #[command(flatten)]
        common: CommonArgs,
        /// Which model(s) to fit.
        #[arg(long, value_enum, default_value_t = ModelArg::All)]
        model: ModelArg,
    },
    /// Render the SVG chart suite from report.json.
    Report(CommonArgs),
    /// Run every stage in order.
    Pipeline(CommonArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Lr,
    Tree,
    Forest,
    All,
}

impl From<ModelArg> for ModelChoice {
    fn from(value: ModelArg) -> Self {
        match value {
            ModelArg::Lr => ModelChoice::Lr,
            ModelArg::Tree => ModelChoice::Tree,
            ModelArg::Forest => ModelChoice::Forest,
            ModelArg::All => ModelChoice::All,
        }
    }
}

fn resolve_config(args: &CommonArgs) -> Result<PipelineConfig, lifexp::Error> {
    let mut cfg = match &args.config {
        Some(path) => PipelineConfig::from_file(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(v) = &args.input {
        cfg.input = v.clone();
    }
    if let Some(v) = &args.geocode {
        cfg.geocode = v.clone();
    }
    if let Some(v) = &args.rules {
        cfg.rules = Some(v.clone());
    }
    if let Some(v) = &args.out {
        cfg.out_dir = v.clone();
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = &args.target {
        cfg.target = v.clone();
    }
    if let Some(v) = args.split_ratio {
        cfg.split_ratio = v;
    }
    if let Some(v) = args.k_max {
        cfg.k_max = v;
    }
    if let Some(v) = args.bins {
        cfg.histogram_bins = v;
    }
    if !args.anova.is_empty() {
        cfg.anova = args.anova.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run() -> Result<(), lifexp::Error> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Preprocess(args) => cmd_preprocess(&resolve_config(args)?),
        Command::Explore(args) => cmd_explore(&resolve_config(args)?),
        Command::Cluster(args) => cmd_cluster(&resolve_config(args)?),
        Command::Train { common, model } => cmd_train(&resolve_config(common)?, (*model).into()),
        Command::Report(args) => cmd_report(&resolve_config(args)?),
        Command::Pipeline(args) => cmd_pipeline(&resolve_config(args)?),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
