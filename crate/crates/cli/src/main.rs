//! `bfcons`: Bayes factors of a linear model against the intercept-only
//! model, posterior-probability curves, inconsistency regions and
//! simulation sweeps.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod io;

use bfcons_core::bayes_factors::RobustRho;
use bfcons_core::QuadratureConfig;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input.
    Input(String),
    /// The numerics did not produce a trustworthy value.
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<bfcons_core::Error> for CliError {
    fn from(e: bfcons_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "bfcons",
    version,
    about = "Bayes factors for linear models against the null model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Log Bayes factor and posterior probability of the null from a
    /// statistic or a data file.
    Compute(ComputeArgs),
    /// Posterior probability of the null across the statistic grid (CSV).
    Curve(CurveArgs),
    /// Inconsistency-set membership grid and boundary curves (CSV).
    Region(RegionArgs),
    /// Monte-Carlo trajectory of a Bayes factor across sample sizes (JSON).
    Simulate(SimulateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct QuadArgs {
    /// Relative tolerance of the quadrature.
    #[arg(long, default_value_t = QuadratureConfig::default().rel_tol)]
    pub rel_tol: f64,
    /// Absolute tolerance on the log of each integral.
    #[arg(long, default_value_t = QuadratureConfig::default().abs_log_tol)]
    pub abs_log_tol: f64,
    /// Maximum number of quadrature panels.
    #[arg(long, default_value_t = QuadratureConfig::default().max_subdivisions)]
    pub max_subdiv: usize,
}

impl QuadArgs {
    pub fn config(&self) -> Result<QuadratureConfig, CliError> {
        let c = QuadratureConfig {
            rel_tol: self.rel_tol,
            abs_log_tol: self.abs_log_tol,
            max_subdivisions: self.max_subdiv,
        };
        c.validate()?;
        Ok(c)
    }
}

#[derive(Args, Debug, Clone)]
pub struct RobustArgs {
    /// Shape `a` of the robust prior.
    #[arg(long)]
    pub a: Option<f64>,
    /// Shift `d` of the robust prior.
    #[arg(long)]
    pub d: Option<f64>,
    /// Truncation `rho` of the robust prior: a number, or `null-matched` for
    /// `d / (d + n)`.
    #[arg(long, value_parser = parse_rho, default_value = "null-matched")]
    pub rho: RobustRho,
}

fn parse_rho(s: &str) -> Result<RobustRho, String> {
    match s {
        "null-matched" | "null_matched" => Ok(RobustRho::NullMatched),
        _ => s
            .parse::<f64>()
            .map(RobustRho::Fixed)
            .map_err(|_| format!("expected a number or 'null-matched', got '{s}'")),
    }
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    /// ip, iph, zs, fs, l, cg, b or robust.
    #[arg(long)]
    pub kind: String,
    /// Sample size (with --bstat).
    #[arg(long, requires = "bstat")]
    pub n: Option<usize>,
    /// Number of regressors (with --bstat).
    #[arg(long, requires = "bstat")]
    pub p: Option<usize>,
    /// The statistic RSS / TSS in [0, 1].
    #[arg(long, conflicts_with = "input", requires_all = ["n", "p"])]
    pub bstat: Option<f64>,
    /// CSV with the response in the first column and regressors after it.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub robust: RobustArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    /// Comma-separated kinds, one column each.
    #[arg(long, value_delimiter = ',', default_value = "ip,iph,zs,fs,l,cg,b")]
    pub kind: Vec<String>,
    /// Sample size.
    #[arg(long)]
    pub n: usize,
    /// Number of regressors.
    #[arg(long)]
    pub p: usize,
    /// Number of statistic values i / grid, i = 1..=grid.
    #[arg(long, default_value_t = 401)]
    pub grid: usize,
    /// Output CSV.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub robust: RobustArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegionKindArg {
    Ip,
    Iph,
    Zs,
    B,
}

#[derive(Args, Debug)]
pub struct RegionArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "ip,iph,zs,b")]
    pub kind: Vec<RegionKindArg>,
    /// Open lower end of the ratio range.
    #[arg(long, default_value_t = 1.001)]
    pub r_min: f64,
    #[arg(long, default_value_t = 20.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub delta_max: f64,
    /// Points per axis.
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// Membership grid CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Boundary CSV; defaults to `<out stem>_boundary.csv`.
    #[arg(long)]
    pub boundary_out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TruthArg {
    Null,
    Alternative,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub kind: String,
    #[arg(long, value_enum)]
    pub truth: TruthArg,
    /// Pseudo-distance of the sampling model (alternative only).
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Keep p fixed across the grid.
    #[arg(long, conflicts_with = "ratio", required_unless_present = "ratio")]
    pub fixed_p: Option<usize>,
    /// Use p = round(n / ratio).
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Strictly ascending comma-separated sample sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_grid: Vec<usize>,
    #[arg(long, default_value_t = 500)]
    pub reps: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output JSON.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub robust: RobustArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(a) => commands::compute(&a),
        Command::Curve(a) => commands::curve(&a),
        Command::Region(a) => commands::region(&a),
        Command::Simulate(a) => commands::simulate(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
