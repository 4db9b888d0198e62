use std::path::PathBuf;

use admire_core::Orientation;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "admire",
    version,
    about = "Single-image non-uniformity correction for infrared-style 8-bit images"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    Columns,
    Rows,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Columns => Orientation::Columns,
            OrientationArg::Rows => Orientation::Rows,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Adaptive midway equalization followed by anisotropic DCT denoising.
    Correct(CorrectArgs),
    /// Column-offset total-variation destriping.
    Baseline(BaselineArgs),
    /// Corrupt a clean image with a seeded nonlinear non-uniformity.
    Simulate(SimulateArgs),
    /// Compare a test image against ground truth.
    Evaluate(EvaluateArgs),
    /// Run the simulated-corruption experiment set and emit a CSV table.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct MireArgs {
    /// Step of the s scan.
    #[arg(long, default_value_t = 0.5)]
    pub s_step: f64,
    /// Largest s scanned.
    #[arg(long, default_value_t = 8.0)]
    pub s_max: f64,
    /// Patch side for the adaptive selection.
    #[arg(long, default_value_t = 8)]
    pub patch: usize,
    /// Step between patch origins.
    #[arg(long, default_value_t = 4)]
    pub stride: usize,
    /// Direction of the fixed pattern.
    #[arg(long, value_enum, default_value_t = OrientationArg::Columns)]
    pub orientation: OrientationArg,
}

#[derive(Debug, Clone, Args)]
pub struct CorrectArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    #[command(flatten)]
    pub mire: MireArgs,
    /// Skip the DCT denoising stage.
    #[arg(long)]
    pub no_denoise: bool,
    /// Threshold for non-stripe DCT coefficients (required unless --no-denoise).
    #[arg(long)]
    pub ti: Option<f64>,
    /// Threshold for cross-stripe DCT coefficients (required unless --no-denoise).
    #[arg(long)]
    pub tj: Option<f64>,
    /// Optional CSV file receiving the per-patch s selections.
    #[arg(long)]
    pub s_map: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Args)]
pub struct BaselineArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = OrientationArg::Columns)]
    pub orientation: OrientationArg,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Gain half-range: gains lie in (1 - alpha, 1 + alpha).
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    /// Offset half-range in gray levels.
    #[arg(long, default_value_t = 10.0)]
    pub beta: f64,
    /// Curvature half-range: peak of the quadratic bump in gray levels.
    #[arg(long, default_value_t = 10.0)]
    pub gamma: f64,
    /// Standard deviation of the additive noise applied before the transfer.
    #[arg(long, default_value_t = 0.0)]
    pub noise_sigma: f64,
    #[arg(long, value_enum, default_value_t = OrientationArg::Columns)]
    pub orientation: OrientationArg,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    pub truth: PathBuf,
    pub test: PathBuf,
    /// Image before correction, used for tv_before (defaults to the truth).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OrientationArg::Columns)]
    pub orientation: OrientationArg,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Clean ground-truth images.
    #[arg(required = true, num_args = 1..)]
    pub images: Vec<PathBuf>,
    /// First simulator seed.
    #[arg(long, default_value_t = 1)]
    pub seed_from: u64,
    /// Last simulator seed (inclusive).
    #[arg(long, default_value_t = 10)]
    pub seed_to: u64,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 10.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub noise_sigma: f64,
    /// Threshold for non-stripe DCT coefficients in the denoised rows.
    #[arg(long)]
    pub ti: f64,
    /// Threshold for cross-stripe DCT coefficients in the denoised rows.
    #[arg(long)]
    pub tj: f64,
    #[command(flatten)]
    pub mire: MireArgs,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}
