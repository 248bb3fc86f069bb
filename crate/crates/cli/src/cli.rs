use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::Overrides;

#[derive(Debug, Parser)]
#[command(
    name = "parafis",
    version,
    about = "Evolving fuzzy classification on drifting streams"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic stream as CSV plus a `.meta.json` sidecar.
    Generate(GenerateArgs),
    /// Run the periodic hold-out protocol for one configuration.
    Run(RunArgs),
    /// Compare two configurations (or two prediction files) with McNemar's test.
    Compare(CompareArgs),
    /// Grid-search ks and the window size on the first 20% of a stream.
    Tune(TuneArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Stream preset name.
    #[arg(long)]
    pub stream: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override the preset length.
    #[arg(long)]
    pub length: Option<usize>,
    /// Output CSV path [default: <output dir>/<stream>-seed<seed>.csv].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Swap two classes at these positions (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub swap_at: Vec<usize>,
    /// Classes exchanged by `--swap-at`.
    #[arg(long, value_delimiter = ',', default_values_t = [0, 1])]
    pub swap_classes: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Flat TOML config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Re-run the configuration embedded in a results file.
    #[arg(long, conflicts_with = "config")]
    pub rerun: Option<PathBuf>,
    /// Results file path [default: <output dir>/<label>.json].
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Config of the first classifier.
    #[arg(long, requires = "config_b")]
    pub config_a: Option<PathBuf>,
    /// Config of the second classifier.
    #[arg(long, requires = "config_a")]
    pub config_b: Option<PathBuf>,
    /// Predictions of the first classifier, one class index per line.
    #[arg(long, requires_all = ["preds_b", "truth"], conflicts_with_all = ["config_a", "config_b"])]
    pub preds_a: Option<PathBuf>,
    #[arg(long, requires_all = ["preds_a", "truth"])]
    pub preds_b: Option<PathBuf>,
    /// True labels, one class index per line.
    #[arg(long, requires_all = ["preds_a", "preds_b"])]
    pub truth: Option<PathBuf>,
    /// Repeat the comparison for each ks value (comma separated), applied to both configs.
    #[arg(long, value_delimiter = ',')]
    pub sweep_ks: Vec<f64>,
    /// Applied on top of both configs.
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// ks grid (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = [0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0])]
    pub ks_grid: Vec<f64>,
    /// Window size grid (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = [10, 25, 50, 100, 200])]
    pub ws_grid: Vec<usize>,
    /// Fraction of the stream used for validation.
    #[arg(long, default_value_t = 0.2)]
    pub fraction: f64,
    #[command(flatten)]
    pub overrides: Overrides,
}
