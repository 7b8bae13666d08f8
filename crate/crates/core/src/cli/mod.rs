//! The `pswf-recon` command line.
//!
//! Exit codes: 0 on success, 1 for usage or validation errors, 2 when the
//! numerics fail (clamped truncation index, truncated eigen-table, solver
//! failure). Errors are reported on stderr as one JSON object
//! `{"error": <kind>, "message": <text>}`.

mod commands;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::pswf::DEFAULT_LAMBDA_FLOOR;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pswf-recon", version, about = "Fourier-to-image reconstruction with prolate spheroidal wave functions")]
pub struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// PSWF tables.
    #[command(subcommand)]
    Pswf(PswfCommand),
    /// Regularized reconstruction on an interval from noisy Fourier data.
    Recon1d(Recon1dArgs),
    /// Regularized reconstruction of a disk phantom in the plane.
    Recon2d(Recon2dArgs),
    /// Analytic phantom transforms.
    #[command(subcommand)]
    Phantom(PhantomCommand),
    /// Stability sweep over noise levels and seeds.
    Sweep(SweepArgs),
}

#[derive(Debug, Subcommand)]
pub enum PswfCommand {
    /// Eigenvalues chi_n, lambda_n and mu_n for n = 0..=N.
    Table(TableArgs),
}

#[derive(Debug, Subcommand)]
pub enum PhantomCommand {
    /// Radon transform R[v](y, theta) on the sinogram grid.
    Sinogram(SinogramArgs),
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub c: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_LAMBDA_FLOOR)]
    pub lambda_floor: f64,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phantom1d {
    /// Hat of half-width sigma / 2 centred at 0.
    Hat,
    /// Indicator of [-sigma / 2, sigma / 2].
    Interval,
}

#[derive(Debug, Args, Serialize)]
pub struct Recon1dArgs {
    #[arg(long)]
    pub c: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, value_enum)]
    pub phantom: Phantom1d,
    #[arg(long)]
    pub noise_seed: u64,
    /// Support half-width; the data radius is r = c / sigma.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// A priori data bound N; noise has norm delta * N. Defaults to the
    /// norm of the exact data.
    #[arg(long)]
    pub noise_scale: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_LAMBDA_FLOOR)]
    pub lambda_floor: f64,
    /// Evaluation points written to recon.csv.
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct Recon2dArgs {
    #[arg(long)]
    pub c: f64,
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub angles: usize,
    #[arg(long)]
    pub seed: u64,
    /// Radius of the centred disk phantom; defaults to sigma / 2.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub noise_scale: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_LAMBDA_FLOOR)]
    pub lambda_floor: f64,
    /// Offsets per direction in the reconstructed sinogram.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    /// Output grid resolution (power of two).
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Frequency cut of the inverse Radon filter, in units of 1 / sigma.
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhantomKind {
    Disk,
}

#[derive(Debug, Args)]
pub struct SinogramArgs {
    #[arg(long, value_enum)]
    pub kind: PhantomKind,
    #[arg(long)]
    pub radius: f64,
    #[arg(long)]
    pub angles: usize,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            if code != EXIT_OK {
                report_error("usage", &e.kind().to_string());
            }
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            report_error("invalid_parameter", &format!("thread pool: {e}"));
            return EXIT_INVALID;
        }
    };
    match pool.install(|| commands::dispatch(&cli.command)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            report_error(e.kind(), &e.to_string());
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INVALID
    }
}

fn report_error(kind: &str, message: &str) {
    let body = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{body}");
}
