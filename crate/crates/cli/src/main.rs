//! `pnglab` command line.

mod output;
mod run;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] pnglab::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numeric_envelope() => 3,
            CliError::Core(pnglab::Error::Io(_)) | CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pnglab",
    version,
    about = "Polynuclear growth with external sources: limit laws, exact CDFs, Monte Carlo"
)]
struct Cli {
    /// Worker threads for sampling (falls back to PNGLAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// File of `key = value` lines; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Limiting distribution functions.
    Dist {
        #[command(subcommand)]
        action: DistAction,
    },
    /// Monte Carlo samples of the raw observables.
    Sim {
        #[command(subcommand)]
        model: SimModel,
    },
    /// Finite-size CDFs from Toeplitz determinants.
    Exact {
        #[command(subcommand)]
        model: ExactModel,
    },
    /// Scaled Monte Carlo against a limit law, as a JSON report.
    Compare(CompareArgs),
}

#[derive(Debug, Subcommand)]
enum DistAction {
    /// CSV table `x,cdf` (with `--pdf`, `x,cdf,pdf`).
    Table(DistArgs),
    /// JSON with mean and variance.
    Mean(DistArgs),
}

#[derive(Debug, Args)]
struct DistArgs {
    /// fgue, fgoe, fgoe2, fgse, f0, g, h, normal or normal2.
    #[arg(long)]
    which: Option<String>,
    /// Parameter of g.
    #[arg(long, allow_negative_numbers = true)]
    w: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    w_plus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    w_minus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    xmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    xmax: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    pdf: bool,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Subcommand)]
enum SimModel {
    /// `L(t)` for Poisson points with edge sources.
    Png(SimPngArgs),
    /// Last-passage time of the geometric lattice model.
    Lpp(SimLppArgs),
    /// Trajectory of the discrete-time exclusion process.
    Tasep(SimTasepArgs),
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct SimPngArgs {
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    alpha_plus: Option<f64>,
    #[arg(long)]
    alpha_minus: Option<f64>,
    #[command(flatten)]
    common: SampleArgs,
}

#[derive(Debug, Args)]
struct SimLppArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    alpha_plus: Option<f64>,
    #[arg(long)]
    alpha_minus: Option<f64>,
    /// Add the corner weight with parameter α₊α₋.
    #[arg(long)]
    corner: bool,
    #[command(flatten)]
    common: SampleArgs,
}

#[derive(Debug, Args)]
struct SimTasepArgs {
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    alpha_plus: Option<f64>,
    #[arg(long)]
    alpha_minus: Option<f64>,
    #[arg(long)]
    steps: Option<u64>,
    /// Half-width of the simulated window (default 4·steps + 16).
    #[arg(long)]
    window: Option<u32>,
    /// sequential-right-to-left or parallel.
    #[arg(long)]
    update_rule: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Subcommand)]
enum ExactModel {
    Png(ExactPngArgs),
    Lpp(ExactLppArgs),
}

#[derive(Debug, Args)]
struct ExactPngArgs {
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    alpha_plus: Option<f64>,
    #[arg(long)]
    alpha_minus: Option<f64>,
    #[arg(long)]
    l_max: Option<usize>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct ExactLppArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    alpha_plus: Option<f64>,
    #[arg(long)]
    alpha_minus: Option<f64>,
    #[arg(long)]
    l_max: Option<usize>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// png or lpp (defaults to the regime's model).
    #[arg(long)]
    model: Option<String>,
    /// PNG_TW, PNG_GAUSS, LPP_TW, LPP_GAUSS, CRITICAL_PNG or CRITICAL_LPP.
    #[arg(long)]
    regime: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Limit law to compare with (defaults to the regime's limit).
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    alpha_plus: Option<f64>,
    #[arg(long)]
    alpha_minus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    w_plus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    w_minus: Option<f64>,
    /// JSON report destination.
    #[arg(long)]
    out: Option<String>,
    /// CSV of `sample_index,raw,scaled`.
    #[arg(long)]
    samples_out: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pnglab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
