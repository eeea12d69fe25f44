//! Command-line grammar. Every option is optional here so that a JSON
//! config can supply it; defaults are applied after layering.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::config::parse_angle;
use crate::model1d::BoundaryCondition;

#[derive(Debug, Parser)]
#[command(
    name = "cone-spectra",
    version,
    about = "Bound states of δ-interactions on conical surfaces"
)]
pub struct Cli {
    /// JSON file with flat keys named after the long options.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Parallel samples; defaults to $CONE_SPECTRA_JOBS, then 1.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the assembled pencil as PATH_A.txt / PATH_M.txt triplets.
    #[arg(long, global = true, value_name = "PATH")]
    pub dump_pencil: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients of the fibers l = 0..=lmax.
    Fibers(FibersArgs),
    /// One-dimensional model problems.
    Model1d(Model1dArgs),
    /// Counting-function sweep over depths with a log-slope fit.
    Sweep(SweepArgs),
    /// Eigenvalues against the aperture on a fixed reference mesh.
    Monotonic(MonotonicArgs),
    /// Lowest eigenvalues of the fibers that must stay above -α²/4.
    Positivity(PositivityArgs),
    /// Lower bound, count and decoupled upper bound at one depth.
    Bracketing(BracketingArgs),
    /// Quick internal consistency checks.
    Selftest,
}

#[derive(Debug, Clone, Args)]
pub struct ConeArgs {
    #[arg(long)]
    pub d: Option<u32>,
    /// Aperture in radians; accepts forms like `pi/4`.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// JSON summary destination; stderr when absent.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FibersArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    #[arg(long)]
    pub lmax: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model1dMode {
    /// Ground state of the interval δ-problem against the half-length.
    Decay,
    /// Counting function of the inverse-square operator against |ln E|.
    Slope,
    /// Ground state of one interval problem.
    Ground,
}

#[derive(Debug, Args)]
pub struct Model1dArgs {
    #[arg(long, value_enum)]
    pub mode: Option<Model1dMode>,
    #[arg(long)]
    pub bc: Option<BoundaryCondition>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Half-length for `ground`.
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub l_min: Option<f64>,
    #[arg(long)]
    pub l_max: Option<f64>,
    #[arg(long)]
    pub l_count: Option<usize>,
    /// Inverse-square coupling for `slope`.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub e_min: Option<f64>,
    #[arg(long)]
    pub e_max: Option<f64>,
    #[arg(long)]
    pub per_decade: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// Truncation multiplier; defaults to 8/α.
    #[arg(long)]
    pub m_sweep: Option<f64>,
    #[arg(long)]
    pub e_max: Option<f64>,
    #[arg(long)]
    pub e_min: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Fixed spacing instead of the default rule.
    #[arg(long)]
    pub h: Option<f64>,
    /// Fail unless every count reaches its tensor-product lower bound.
    #[arg(long)]
    pub check_lower_bound: bool,
    #[arg(long)]
    pub check_refinement: bool,
    #[arg(long)]
    pub check_truncation: bool,
    /// Measure depths from `mesh` (default) or `continuum` threshold.
    #[arg(long)]
    pub threshold: Option<crate::asymptotics::ThresholdReference>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MonotonicArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Comma-separated apertures, e.g. `pi/8,pi/6,pi/4,pi/3`.
    #[arg(long, value_delimiter = ',', value_parser = parse_angle)]
    pub thetas: Option<Vec<f64>>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub extent_s: Option<f64>,
    #[arg(long)]
    pub extent_t: Option<f64>,
    #[arg(long)]
    pub back: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PositivityArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    #[arg(long)]
    pub lmax: Option<u32>,
    #[arg(long)]
    pub extent_s: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BracketingArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// Depth below the threshold.
    #[arg(long)]
    pub e: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    /// Strip length; defaults to 8·|ln E|.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}
