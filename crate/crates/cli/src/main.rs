//! `dioph`: command-line experiments on Möbius-weighted periodic Bernoulli
//! series. Each subcommand writes CSV or a JSON report; see the README for
//! column layouts.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diophantine_core::asymptotic::{Kernel, DEFAULT_NODES, DEFAULT_RADIUS};
use diophantine_core::mellin::{DEFAULT_C, DEFAULT_STEPS, DEFAULT_TAPER};
use diophantine_core::series::{Coefficient, DEFAULT_CHUNK};
use diophantine_core::zeros::DEFAULT_ZERO_BUDGET;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "dioph", version, about = "Möbius-weighted periodic Bernoulli series experiments")]
pub struct Cli {
    /// key=value settings file; flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Evaluate a truncated series on an x grid.
    #[command(args_override_self = true)]
    Eval(EvalArgs),
    /// Check the squared-B̄₁ identities and compare with their printed forms.
    #[command(args_override_self = true)]
    Identities(IdentitiesArgs),
    /// Build the small-x model from residues, or fit it to series samples.
    #[command(args_override_self = true)]
    Upsilon(UpsilonArgs),
    /// Series minus model, and the growth exponent of the difference.
    #[command(args_override_self = true)]
    Residual(ResidualArgs),
    /// Sums over zeta zeros, optionally the full explicit-formula check.
    #[command(args_override_self = true)]
    Zeros(ZerosArgs),
    /// Direct quadrature of the inversion integral on a vertical line.
    #[command(args_override_self = true)]
    Mellin(MellinArgs),
    /// Quick self-consistency checks.
    #[command(args_override_self = true)]
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long = "x-min")]
    pub x_min: Option<f64>,
    #[arg(long = "x-max")]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Evenly spaced grid instead of log-spaced.
    #[arg(long)]
    pub linear: bool,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Number of series terms; accepts forms like 1e7.
    #[arg(long = "N", value_parser = parse_count)]
    pub terms: Option<u64>,
    /// Worker threads (default: DIOPH_WORKERS, else all cores).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub workers: Option<u64>,
    /// Terms per reduction chunk. Changing it changes rounding, not the value.
    #[arg(long, default_value_t = DEFAULT_CHUNK, value_parser = clap::value_parser!(u64).range(1..))]
    pub chunk: u64,
    /// Run on the calling thread only.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the selected format here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Also write the JSON report here.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Residue,
    Fit,
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    #[arg(long, default_value = "mulog", value_parser = parse_coefficient)]
    pub coefficient: Coefficient,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Power of n in the denominator (default k, or 2 with --squared).
    #[arg(long)]
    pub power: Option<u32>,
    /// Use B̄₁(nx)² in place of B̄_k(nx).
    #[arg(long)]
    pub squared: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct IdentitiesArgs {
    /// Grid points x = i/grid.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..=100_000))]
    pub grid: u64,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct UpsilonArgs {
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    #[arg(long, default_value = "mulog", value_parser = parse_kernel)]
    pub kernel: Kernel,
    #[arg(long = "l-max", default_value_t = 2)]
    pub l_max: u32,
    #[arg(long, value_enum, default_value_t = Method::Residue)]
    pub method: Method,
    /// With --method fit, also fit trailing terms up to this index.
    #[arg(long = "fit-trailing")]
    pub fit_trailing: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub radius: f64,
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ResidualArgs {
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    #[arg(long, default_value = "mulog", value_parser = parse_kernel)]
    pub kernel: Kernel,
    #[arg(long = "l-max", default_value_t = 4)]
    pub l_max: u32,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ZerosArgs {
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    #[arg(long, default_value = "mulog", value_parser = parse_kernel)]
    pub kernel: Kernel,
    /// Zero table, one ordinate per line (default: bundled 200 zeros).
    #[arg(long, value_name = "FILE")]
    pub zeros: Option<PathBuf>,
    /// Zeros used in the plain zero sum.
    #[arg(long, default_value_t = DEFAULT_ZERO_BUDGET)]
    pub budget: usize,
    /// Compare series against model + zero sum for each budget.
    #[arg(long)]
    pub explicit: bool,
    #[arg(long, value_delimiter = ',', default_value = "0,10,25,50,100")]
    pub budgets: Vec<usize>,
    #[arg(long = "l-max", default_value_t = 4)]
    pub l_max: u32,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct MellinArgs {
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    #[arg(long, default_value = "zeta", value_parser = parse_kernel)]
    pub kernel: Kernel,
    /// Height at which the line is cut.
    #[arg(long = "T", default_value_t = 500.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    /// Abscissa of the line.
    #[arg(long, default_value_t = DEFAULT_C)]
    pub c: f64,
    #[arg(long, default_value_t = DEFAULT_TAPER)]
    pub taper: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.3,0.7")]
    pub x: Vec<f64>,
    /// Series terms for the comparison target of the non-ζ kernels.
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SelftestArgs {
    #[command(flatten)]
    pub out: OutArgs,
}

fn parse_count(s: &str) -> Result<u64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !(v.is_finite() && v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64) {
        return Err(format!("{s:?} is not a whole number in 1..=4294967295"));
    }
    Ok(v as u64)
}

fn parse_kernel(s: &str) -> Result<Kernel, String> {
    s.parse().map_err(|e: diophantine_core::Error| e.to_string())
}

fn parse_coefficient(s: &str) -> Result<Coefficient, String> {
    s.parse().map_err(|e: diophantine_core::Error| e.to_string())
}

/// 1 for bad input, 2 when the numerics themselves failed.
fn exit_code(err: &anyhow::Error) -> u8 {
    let numeric = err
        .chain()
        .filter_map(|e| e.downcast_ref::<diophantine_core::Error>())
        .any(|e| e.is_numeric());
    if numeric || err.downcast_ref::<commands::ChecksFailed>().is_some() {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let raw: Vec<_> = std::env::args_os().collect();
    let (args, prov) = match config::expand_args(raw) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match commands::run(&cli, &prov) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
