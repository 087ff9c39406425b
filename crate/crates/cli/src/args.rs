//! Command-line surface. All physical values are in `/2π` MHz user units.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "wgdp",
    version,
    about = "Detection probability of a single waveguided photon"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single point, bare detector.
    Bare {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Single point, detector in the microring cavity.
    Cavity {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// 1-D or 2-D grid over `--axis` specifications.
    Sweep {
        /// Detector flavor; inferred from the parameters when omitted.
        #[arg(long, value_enum)]
        flavor: Option<FlavorArg>,
        /// `<param>:<start>:<stop>:<count>`, given once or twice.
        #[arg(long = "axis", num_args = 1)]
        axes: Vec<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Regenerate the data behind one of the figures (2 to 6).
    Fig {
        figure: u8,
        /// Override the per-axis point count.
        #[arg(long)]
        count: Option<usize>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Locate the DP-maximizing couplings.
    Optimize {
        #[arg(value_enum)]
        target: OptimizeTarget,
        /// Comma-separated free parameters (cavity target).
        #[arg(long, value_delimiter = ',')]
        free: Vec<String>,
        /// `<param>:<lower>:<upper>`, repeatable.
        #[arg(long = "bounds", num_args = 1)]
        bounds: Vec<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the closed forms against the linear oracle on random draws.
    Verify {
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlavorArg {
    Bare,
    Cavity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptimizeTarget {
    Bare,
    Cavity,
    /// Along the matching curve `h = 0`, `g = g_opt(V)`.
    Matched,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Default, Args)]
pub struct ParamArgs {
    /// Atomic dissipation gamma_q/2pi.
    #[arg(long = "gamma-q", allow_negative_numbers = true)]
    pub gamma_q: Option<f64>,
    /// Cavity dissipation gamma_c/2pi.
    #[arg(long = "gamma-c", allow_negative_numbers = true)]
    pub gamma_c: Option<f64>,
    /// Atom-waveguide coupling h/2pi.
    #[arg(long = "h", allow_negative_numbers = true)]
    pub h: Option<f64>,
    /// Waveguide-cavity coupling V/2pi.
    #[arg(long = "V", allow_negative_numbers = true)]
    pub v: Option<f64>,
    /// Atom-cavity coupling g/2pi.
    #[arg(long = "g", allow_negative_numbers = true)]
    pub g: Option<f64>,
    /// Photon-atom detuning.
    #[arg(long = "delta", allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Photon-cavity detuning.
    #[arg(long = "delta-c", allow_negative_numbers = true)]
    pub delta_c: Option<f64>,
    /// Atomic decay rate into the waveguide, instead of h.
    #[arg(long = "Gamma1", allow_negative_numbers = true)]
    pub gamma_1: Option<f64>,
    /// JSON output of an earlier run (or `{"parameters": {...}}`) to start from.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl ParamArgs {
    pub fn given(&self) -> Vec<(&'static str, f64)> {
        [
            ("gamma_q", self.gamma_q),
            ("gamma_c", self.gamma_c),
            ("h", self.h),
            ("V", self.v),
            ("g", self.g),
            ("delta", self.delta),
            ("delta_c", self.delta_c),
            ("Gamma1", self.gamma_1),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect()
    }
}

#[derive(Debug, Default, Args)]
pub struct OutputArgs {
    /// Data file; a `<out>.manifest.json` sidecar is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}
