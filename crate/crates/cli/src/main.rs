use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod input;
mod numfmt;
mod report;

use input::Invalid;

/// Algebraic analysis of closed 6R linkages.
#[derive(Parser)]
#[command(name = "hexlink", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: DH table, coupling dimensions, quad polynomials, bond
    /// conditions, family checks and genus bound
    Analyze(AnalyzeArgs),
    /// Family checks with their equations, and the genus bound
    Classify(CommonArgs),
    /// Invariant quad polynomials and the bond conditions they impose
    Quadpoly(QuadpolyArgs),
    /// Axis lines for a DH table, written as a linkage file
    Synth(SynthArgs),
    /// Trace the configuration curve through the given assembly (CSV)
    SampleMotion(SampleMotionArgs),
    /// Coupler curve degree of one link relative to another
    CouplerDegree(CouplerDegreeArgs),
}

#[derive(Args, Clone, Copy)]
pub struct BackendArgs {
    /// Exact rational arithmetic (default)
    #[arg(long, conflicts_with = "float")]
    pub exact: bool,
    /// Double-precision arithmetic with relative tolerances
    #[arg(long)]
    pub float: bool,
}

#[derive(Args, Clone, Copy)]
pub struct FormatArgs {
    /// Machine-readable JSON output
    #[arg(long, conflicts_with = "text")]
    pub json: bool,
    /// Human-readable text output (default)
    #[arg(long)]
    pub text: bool,
}

#[derive(Args)]
pub struct CommonArgs {
    /// Linkage file (JSON with "lines" or "dh")
    pub file: PathBuf,
    #[command(flatten)]
    pub backend: BackendArgs,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Also trace the motion numerically and summarize it
    #[arg(long)]
    pub motion: bool,
    /// Step budget for --motion
    #[arg(long, default_value_t = 2000)]
    pub steps: usize,
    /// Seed for assembling a DH table before tracing
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub struct QuadpolyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Compute by elimination on the axes instead of the closed form
    /// (HEXLINK_SEED sets the random combination seed)
    #[arg(long)]
    pub elim: bool,
    /// Seed for assembling a DH table when --elim needs axes
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub struct SynthArgs {
    /// DH table (JSON with "dh")
    pub file: PathBuf,
    #[command(flatten)]
    pub backend: BackendArgs,
    /// Seed for the numerical assembly search
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SampleMotionArgs {
    /// Linkage file (JSON with "lines" or "dh")
    pub file: PathBuf,
    /// Budget of accepted continuation steps
    #[arg(long, default_value_t = 2000)]
    pub steps: usize,
    /// Bound on the normalized closure residual of accepted samples
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
    /// Predictor step length in half-angle space
    #[arg(long, default_value_t = 0.05)]
    pub step_size: f64,
    /// Seed for assembling a DH table before tracing
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV output path (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CouplerDegreeArgs {
    /// Bond diagram as comma-separated "i-j:k" entries (joints 1..6)
    #[arg(long, allow_hyphen_values = true)]
    pub diagram: String,
    /// Two distinct links "i,j" (link i joins joints i and i+1)
    #[arg(long)]
    pub pair: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => commands::analyze(&a),
        Command::Classify(a) => commands::classify(&a),
        Command::Quadpoly(a) => commands::quadpoly(&a),
        Command::Synth(a) => commands::synth(&a),
        Command::SampleMotion(a) => commands::sample_motion(&a),
        Command::CouplerDegree(a) => commands::coupler_degree(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Invalid>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
