//! `histosynth` command-line front end.
//!
//! Exit codes: 0 on success, 2 for unusable arguments or configuration, 1
//! when processing fails. A single JSON summary line goes to stdout; logs go
//! to stderr (`RUST_LOG` controls verbosity).

mod commands;
mod config;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{Method, Order, RatioList, Tag};

/// Raised for problems the caller can fix by changing arguments.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Parser, Debug)]
#[command(name = "histosynth", version, about = "Synthesize and measure labeled placenta histology images")]
struct Cli {
    /// Worker threads; outputs do not depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// JSON config file or a previous run's manifest; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Patch-based reconstruction of new realizations of an exemplar.
    Reconstruct(ReconstructFlags),
    /// Generate a dataset arm: conventional augmentation, optionally followed
    /// by reconstruction.
    Augment(AugmentFlags),
    /// Morphometrics of one mask or a directory of masks.
    Analyze(AnalyzeFlags),
    /// Volume fraction and specific surface against grid ratio.
    Sweep(SweepFlags),
    /// Write the bundled synthetic exemplar (or a freshly generated one).
    Exemplar(ExemplarFlags),
}

#[derive(Args, Debug, Serialize)]
struct PairFlags {
    /// Exemplar RGB image (PNG).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<PathBuf>,
    /// Exemplar two-level mask (PNG).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    mask: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct GridFlags {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    grid_ratio: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    overlap: Option<usize>,
    /// Sampling window step over the exemplar.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    stride: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    priority_factor: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct ReconstructFlags {
    #[command(flatten)]
    #[serde(flatten)]
    pair: PairFlags,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    grid: GridFlags,
}

#[derive(Args, Debug, Serialize)]
struct BaseAugmentFlags {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    color_shift_limit: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    zoom_max: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    rotation_max: Option<f64>,
    /// Drive the vertical elastic wave with y rather than x.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    elastic_y_uses_y: bool,
}

#[derive(Args, Debug, Serialize)]
struct AugmentFlags {
    #[command(flatten)]
    #[serde(flatten)]
    pair: PairFlags,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<Method>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    grid: GridFlags,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<Order>,
    #[command(flatten)]
    augment: BaseAugmentFlags,
}

#[derive(Args, Debug, Serialize)]
struct AnalyzeFlags {
    /// A mask PNG or a directory of them.
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out_dir: Option<PathBuf>,
    /// Also write the feature-point CSV and hull area.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    cloud: bool,
    /// Also write each mask's chamber radius histogram as CSV.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    hist: bool,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    tag: Option<Tag>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    h_min: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct SweepFlags {
    #[command(flatten)]
    #[serde(flatten)]
    pair: PairFlags,
    /// `1..20` or `1,6,20`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    ratios: Option<RatioList>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    repeats: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    overlap: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    stride: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    priority_factor: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    h_min: Option<f64>,
    /// Also write a gnuplot script for the sweep.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    plot: bool,
}

#[derive(Args, Debug)]
struct ExemplarFlags {
    #[arg(long)]
    out_dir: PathBuf,
    /// Generate a phantom of this size instead of copying the bundled one.
    #[arg(long)]
    size: Option<usize>,
    /// Phantom seed; implies generation.
    #[arg(long)]
    seed: Option<u64>,
}

fn run(cli: Cli) -> anyhow::Result<serde_json::Value> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(UsageError("--jobs must be >= 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let file = cli.config.as_deref();
    match cli.command {
        Command::Reconstruct(flags) => commands::reconstruct::run(config::resolve("reconstruct", file, &flags)?),
        Command::Augment(flags) => commands::augment::run(config::resolve("augment", file, &flags)?),
        Command::Analyze(flags) => commands::analyze::run(config::resolve("analyze", file, &flags)?),
        Command::Sweep(flags) => commands::sweep::run(config::resolve("sweep", file, &flags)?),
        Command::Exemplar(flags) => commands::exemplar::run(&flags.out_dir, flags.size, flags.seed),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let usage = err.chain().any(|e| e.is::<UsageError>());
            eprintln!("error: {err:#}");
            println!("{}", serde_json::json!({ "status": "error", "message": format!("{err:#}") }));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
