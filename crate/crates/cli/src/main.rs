//! `sbwave`: estimate densities from size-biased samples, run the simulation
//! study, and dump efficiency curves and wavelet tables.

mod commands;
mod error;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sbwave::biased_estimator::Method;
use sbwave::experiments::{EffCase, ExampleId};

#[derive(Parser)]
#[command(name = "sbwave", version, about = "Warped wavelet density estimation for size-biased data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate f from a single-column CSV of biased observations.
    Estimate(EstimateArgs),
    /// Monte Carlo comparison of the estimators on a simulation example.
    Simulate(SimulateArgs),
    /// Asymptotic relative efficiency of a resolution-level choice.
    Eff(EffArgs),
    /// Scaling function and wavelet on a dyadic grid.
    WaveletTable(WaveletTableArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ThresholdArg {
    Hard,
    Soft,
    None,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AuxArg {
    Kde,
    Wavelet,
    None,
}

#[derive(Args)]
pub struct EstimateArgs {
    /// Single-column CSV; a non-numeric first row is treated as a header.
    pub input: PathBuf,
    /// Grid output; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Diagnostics JSON; defaults to the output path with a `.json` extension.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
    /// Biasing function, e.g. `0.1 + 0.9*x` or `betainv(2, 2)`.
    #[arg(long, default_value = "1")]
    pub weight: String,
    #[arg(long, default_value = "m3")]
    pub method: Method,
    /// Override the method's power.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub j0: u32,
    #[arg(long, conflicts_with = "p")]
    pub j1: Option<u32>,
    /// `J1 = ceil(p log2 n)`; defaults to 0.45 for m1/m2 and 0.95 for m3/m4.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value = "sym10")]
    pub filter: String,
    #[arg(long, value_enum, default_value = "hard")]
    pub threshold: ThresholdArg,
    /// Estimator of the biased density, used when `a != 1` or warping.
    #[arg(long, value_enum, default_value = "kde")]
    pub aux: AuxArg,
    #[arg(long, default_value_t = 250)]
    pub grid: usize,
    /// Margin of the rescaling to `[eps, 1 - eps]`; default `1.9^-J1`.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Clip negative values and renormalize over the grid.
    #[arg(long)]
    pub clip_negative: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[arg(long, default_value = "ex1")]
    pub example: ExampleId,
    /// Keep the third example's printed density without renormalizing.
    #[arg(long)]
    pub literal: bool,
    #[arg(long = "n", value_delimiter = ',', default_value = "250,500,750,1000")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    #[arg(long, value_delimiter = ',', default_value = "m1,m2,m3,m4")]
    pub methods: Vec<Method>,
    #[arg(long = "p", value_delimiter = ',', default_value = "0.2,0.45,0.7,0.95")]
    pub p_values: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, default_value_t = 250)]
    pub grid: usize,
    /// Exit with status 3 if any replication fails.
    #[arg(long)]
    pub strict: bool,
    /// Per-replication ASE values as CSV.
    #[arg(long)]
    pub raw: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args)]
pub struct EffArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
    #[arg(long, default_value_t = 400)]
    pub k_max: u32,
    #[arg(long = "m", value_delimiter = ',', default_value = "1,25,50,75")]
    pub ms: Vec<u32>,
    #[arg(long = "case", value_delimiter = ',', default_value = "a_eq_1,a_ne_1")]
    pub cases: Vec<EffCase>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args)]
pub struct WaveletTableArgs {
    #[arg(long, default_value = "sym10")]
    pub filter: String,
    /// Grid spacing `2^-level`.
    #[arg(long, default_value_t = 10)]
    pub level: u32,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate(args) => commands::estimate(&args),
        Command::Simulate(args) => commands::simulate(&args),
        Command::Eff(args) => commands::eff(&args),
        Command::WaveletTable(args) => commands::wavelet_table(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sbwave: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
