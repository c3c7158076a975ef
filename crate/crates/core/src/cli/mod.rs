//! The `hetprobit` command line: argument parsing, file formats and figures.

pub mod config;
pub mod data;
mod commands;
pub mod outputs;
pub mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};

pub use data::{dataset_to_csv, parse_dataset, read_dataset, write_dataset};

#[derive(Debug, Parser)]
#[command(name = "hetprobit", version, about = "Heteroskedastic probit estimation and plateau diagnostics")]
pub struct Cli {
    /// Worker threads for multi-start and profile runs (0 = all cores).
    #[arg(long, global = true, env = "HETPROBIT_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a dataset and write it with a JSON sidecar of its parameters.
    Simulate(SimulateArgs),
    /// Maximize the log-likelihood from one start.
    Fit(FitArgs),
    /// Run every configured method from many random starts.
    Multistart(MultistartArgs),
    /// Tabulate the log-likelihood over two variance coefficients.
    Profile(ProfileArgs),
    /// Shift the variance covariates by one half and rescale the parameters.
    Transform(TransformArgs),
    /// Multi-start on a dataset and on its transformation, with paired starts.
    Compare(CompareArgs),
    /// Print the flat-likelihood benchmark and related values.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Experiment config with `preset`/`seed` or `dgp`.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `het-paper`, `het-gamma6` or `probit-paper`.
    #[arg(long, conflicts_with = "config")]
    pub preset: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the number of observations.
    #[arg(long)]
    pub n: Option<usize>,
    /// Dataset CSV; the sidecar goes next to it with a `.json` extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value = "bfgs")]
    pub method: crate::optimize::Method,
    /// Comma-separated `(β, γ)`, `random:<seed>`, or a JSON file with
    /// `beta` and `gamma`. Defaults to all zeros.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    /// SANN seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub f_tol: Option<f64>,
    #[arg(long)]
    pub g_tol: Option<f64>,
    /// Refit γ with β frozen when the joint fit lands on the plateau.
    #[arg(long)]
    pub two_stage: bool,
    #[command(flatten)]
    pub plateau: PlateauArgs,
    /// Write the JSON here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct PlateauArgs {
    /// Allowed distance of ℓ/n from −ln 2 for the plateau flag.
    #[arg(long)]
    pub plateau_delta: Option<f64>,
    /// Lower bound on every γ̂ component for the plateau flag.
    #[arg(long)]
    pub plateau_tau: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MultistartArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub config: PathBuf,
    /// Reference point file; overrides the config.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Overrides `output.dir` from the config.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[command(flatten)]
    pub plateau: PlateauArgs,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Base point: comma-separated `(β, γ)` or a JSON file with `beta` and
    /// `gamma`.
    #[arg(long, allow_hyphen_values = true)]
    pub base: String,
    /// Two distinct zero-based γ indices, e.g. `0,1`.
    #[arg(long, default_value = "0,1")]
    pub indices: String,
    /// `lo,hi` for both axes.
    #[arg(long, default_value = "-5,15", allow_hyphen_values = true)]
    pub range: String,
    /// `lo,hi` for the second axis, if different.
    #[arg(long, allow_hyphen_values = true)]
    pub range2: Option<String>,
    #[arg(long, default_value_t = 81)]
    pub resolution: usize,
    #[arg(long, default_value_t = crate::harness::DEFAULT_CLIP_FLOOR, allow_hyphen_values = true)]
    pub clip_floor: f64,
    /// Grid CSV; `.svg` and `.json` siblings are written next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// JSON file with `beta` and `gamma`.
    #[arg(long)]
    pub params: PathBuf,
    /// Transformed dataset CSV; the sidecar goes next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Reference point file; overrides the config.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[command(flatten)]
    pub plateau: PlateauArgs,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Optional point at which to report ℓ and the plateau approximation.
    #[arg(long)]
    pub params: Option<PathBuf>,
}

/// Writes `contents`, creating parent directories.
pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Json {
        path: path.to_path_buf(),
        source: e,
    })?;
    text.push('\n');
    write_file(path, &text)
}

/// Runs a parsed command line. `out` receives what would go to stdout.
pub fn execute(cli: Cli, out: &mut (dyn std::io::Write + Send)) -> Result<()> {
    let threads = cli.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| commands::dispatch(cli.command, out))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli, &mut std::io::stdout()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
