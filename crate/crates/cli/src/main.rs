use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod experiments;
mod output;

use output::Artifact;

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "povmforge", version, about = "Programmable detector experiments")]
struct Cli {
    /// Master seed; every experiment derives its streams from it.
    #[arg(long, global = true, env = "POVMFORGE_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Absolute tolerance for measured-versus-predicted checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Symmetric-projector detector: accuracy against program size.
    FiurasekScan(FiurasekArgs),
    /// Covariant spin-j detector: accuracy against ancilla dimension.
    CovariantScan(CovariantArgs),
    /// Greedy unitary nets: size against accuracy, with a power-law fit.
    NetScan(NetArgs),
    /// Bell-POVM programming residuals for covariant densities.
    ExactCheck(ExactArgs),
    /// Distance between two POVM files with its norm bounds.
    Distance(DistanceArgs),
}

#[derive(Args, Debug)]
pub struct FiurasekArgs {
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    /// Haar-random target observables per row.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct CovariantArgs {
    /// Smallest ancilla spin, as 2j.
    #[arg(long, default_value_t = 1)]
    pub j_min: u32,
    /// Largest ancilla spin, as 2j.
    #[arg(long, default_value_t = 9)]
    pub j_max: u32,
    /// Random rotations per row.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct NetArgs {
    /// System dimension.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.2, 0.9, 0.7, 0.5, 0.35])]
    pub eps: Vec<f64>,
    /// Consecutive rejections that stop the greedy construction.
    #[arg(long, default_value_t = 4000)]
    pub budget: usize,
    /// Fresh samples for coverage certification.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.99)]
    pub min_coverage: f64,
    #[arg(long, default_value_t = 1.3)]
    pub exponent_min: f64,
    #[arg(long, default_value_t = 2.7)]
    pub exponent_max: f64,
    /// Fit JSON path; defaults to `<out>.fit.json`, or a trailing comment on stdout.
    #[arg(long)]
    pub fit_out: Option<PathBuf>,
    /// Writes the net of the smallest accuracy as JSON.
    #[arg(long)]
    pub net_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    /// Random (seed state, rotation) pairs, after the maximally mixed control row.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Largest admissible residual.
    #[arg(long, default_value_t = 1e-10)]
    pub threshold: f64,
    /// Programs `ν` instead of `ν^⊤`; rows with residual above 0.1 are flagged.
    #[arg(long)]
    pub negative_control: bool,
    /// Fraction of random rows that must be flagged under the negative control.
    #[arg(long, default_value_t = 0.95)]
    pub control_fraction: f64,
}

#[derive(Args, Debug)]
pub struct DistanceArgs {
    pub povm_a: PathBuf,
    pub povm_b: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let header = output::Header::new(&cli);
    let result = match &cli.command {
        Command::FiurasekScan(a) => experiments::fiurasek_scan(&cli, a),
        Command::CovariantScan(a) => experiments::covariant_scan(&cli, a),
        Command::NetScan(a) => experiments::net_scan(&cli, a),
        Command::ExactCheck(a) => experiments::exact_check(&cli, a),
        Command::Distance(a) => experiments::distance(&cli, a),
    };
    let run = match result {
        Ok(run) => run,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = output::emit(&header, cli.out.as_deref(), &run.artifacts) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    for breach in &run.breaches {
        eprintln!("breach: {breach}");
    }
    if run.breaches.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

/// Result of one command: files to write and failed row-level assertions.
pub struct Run {
    pub artifacts: Vec<Artifact>,
    pub breaches: Vec<String>,
}
