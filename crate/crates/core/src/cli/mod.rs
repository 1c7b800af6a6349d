//! Command-line front end: single-point evaluation, figure sweeps and the discrepancy
//! report.

mod config;
mod csv;
mod eval;
mod figures;
mod report;
mod sweep;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;

pub use config::Config;
pub use eval::EvalSettings;
pub use figures::{figure_csv, FigureName, FigureSettings};
pub use report::{af_search, write_report, AfRow, ReportOptions};
pub use sweep::{McSpec, SweepParams, SweepSpec};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const DOMAIN: i32 = 2;
    pub const NUMERIC: i32 = 3;
    pub const USAGE: i32 = 64;
}

#[derive(Debug, Parser)]
#[command(name = "jfts-capacity", version, about = "Capacity of joint fading and two-path shadowing channels")]
struct Cli {
    /// TOML file supplying defaults for any flag; flags on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one scheme at one operating point.
    Eval(EvalArgs),
    /// Write the CSV behind one of the figures.
    Figure(FigureArgs),
    /// Write the closed-form vs quadrature vs Monte Carlo discrepancy report.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Opra,
    Ora,
    Cifr,
    Tifr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Quad,
    Mc,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Rician K-factor in dB.
    #[arg(long, allow_negative_numbers = true)]
    k_db: Option<f64>,
    /// Shadowing factor S_h in dB.
    #[arg(long, allow_negative_numbers = true)]
    sh_db: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    /// Gauss-Hermite order.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    gamma_bar_db: Option<f64>,
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Quadrature truncation as a multiple of the mean CSNR.
    #[arg(long)]
    gamma_max_mult: Option<f64>,
    /// Monte Carlo sample count.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Relative tolerance of the cutoff solver.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
struct FigureArgs {
    #[arg(value_enum)]
    name: FigureName,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    from_db: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    to_db: Option<f64>,
    #[arg(long)]
    step_db: Option<f64>,
    #[arg(long)]
    gamma_max_mult: Option<f64>,
    /// Add Monte Carlo columns with this many samples per point.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Monte Carlo samples per point; 0 disables the Monte Carlo columns.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Core(e) if e.is_domain() => exit::DOMAIN,
            CliError::Core(_) | CliError::Io(_) => exit::NUMERIC,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Applies `JFTS_THREADS` (0 or unset: one worker per core).
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("JFTS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("JFTS_THREADS must be a nonnegative integer, got {raw:?}")))?;
    if n > 0 {
        // a pool that is already initialized keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the command and returns the exit
/// code. Output goes to stdout, errors to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("jfts-capacity: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Eval(a) => eval::run(&eval::EvalSettings::resolve(&a, &config)?, &mut stdout),
        Command::Figure(a) => {
            let spec = figures::FigureSettings::resolve(&a, &config)?;
            figures::run(a.name, &spec, &a.out)
        }
        Command::Report(a) => {
            let opts = ReportOptions {
                mc_n: a.n.or(config.n).unwrap_or(report::DEFAULT_MC_N),
                seed: a.seed.or(config.seed).unwrap_or(sweep::DEFAULT_SEED),
            };
            write_report(&a.out, &opts)
        }
    }
}
