use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gauss_avqfi::avqfi::DEFAULT_NODES;

#[derive(Debug, Parser)]
#[command(name = "avqfi", version, about = "QFI and direction-averaged QFI of Gaussian probes for squeezing estimation")]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// QFI for one squeezing direction.
    Qfi(QfiArgs),
    /// QFI averaged over the squeezing direction.
    Avqfi(AvqfiArgs),
    /// Random single-mode probes at fixed photon number, with their AvQFI.
    Sample(SampleArgs),
    /// Optimal single-mode probe against TMSV over a (photons, η) grid.
    Sweep(SweepArgs),
    /// Identity and finite-difference oracle checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format. Reports default to json, tables to csv.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Vacuum,
    Squeezed,
    Thermal,
    Coherent,
    Tmsv,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Probe as inline JSON `{"modes": m, "gamma": [[..]], "xi": [..]}` or a path to such a file.
    #[arg(long, conflicts_with = "preset")]
    pub state: Option<String>,

    /// Named probe; photon number per mode from --n-a.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,

    /// Photon number of mode A for presets.
    #[arg(long = "n-a", default_value_t = 1.0)]
    pub n_a: f64,
}

#[derive(Debug, Args)]
pub struct EncodingArgs {
    /// Squeezing strength ε.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub epsilon: f64,

    /// Transmissivity η of the loss on mode A.
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
}

#[derive(Debug, Args)]
pub struct QfiArgs {
    #[command(flatten)]
    pub state: StateArgs,

    #[command(flatten)]
    pub encoding: EncodingArgs,

    /// Squeezing direction θ in radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,

    /// Rerun through the finite-difference engine and report the deviation.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct AvqfiArgs {
    #[command(flatten)]
    pub state: StateArgs,

    #[command(flatten)]
    pub encoding: EncodingArgs,

    /// Quadrature nodes over θ.
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,

    /// Tabulated θ density (whitespace or comma separated values on an even
    /// grid over [0, 2π)), or `uniform`.
    #[arg(long)]
    pub prior: Option<String>,

    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleKind {
    Pure,
    Mixed,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long = "n-a", default_value_t = 1.0)]
    pub n_a: f64,

    #[arg(long, default_value_t = 1000)]
    pub count: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = SampleKind::Mixed)]
    pub kind: SampleKind,

    #[command(flatten)]
    pub encoding: EncodingArgs,

    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,

    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    #[value(name = "fixed_nA")]
    FixedNA,
    #[value(name = "fixed_N")]
    FixedN,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Photon numbers of mode A, `value` or `start:end:count` (fixed_nA).
    #[arg(long = "n-a")]
    pub n_a: Option<String>,

    /// Total photon numbers, `value` or `start:end:count` (fixed_N).
    #[arg(long = "n-total")]
    pub n_total: Option<String>,

    /// Transmissivities, `value` or `start:end:count`.
    #[arg(long, default_value = "0:1:5")]
    pub eta: String,

    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,

    #[arg(long, value_enum, default_value_t = Mode::FixedNA)]
    pub mode: Mode,

    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Mixed probes drawn per grid point to spot-check the pure-probe optimum.
    #[arg(long, default_value_t = 0)]
    pub mixed_samples: usize,

    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Random cases per check.
    #[arg(long, default_value_t = 20)]
    pub count: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
}
