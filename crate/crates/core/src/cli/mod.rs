//! Command-line front end: sweeps, figure curve data, gain optimization and
//! cross-validation of the two computation paths.
//!
//! Every subcommand accepts `--config PATH`, a `key=value` file whose keys
//! mirror the long flags; flags given on the command line win.

mod config;
mod figure;
mod optimize;
mod output;
mod sweep;
mod validate;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{Config, Grid};
pub use figure::{figure_curves, Curve, FigureId, DEFAULT_POINTS};
pub use optimize::{optimize_report, OptimizeReport};
pub use output::{format_number, Format, Table};
pub use sweep::{sweep_table, SweepParam, Vary};
pub use validate::{
    duality_residual, oracle_residual, run_validation, sample_duality_setup, sample_oracle_setup,
    ValidationOutcome, ValidationSettings, COVARIANCE_TOLERANCE, DUALITY_TOLERANCE,
    MOMENT_TOLERANCE,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "icoh",
    version,
    about = "Induced-coherence interferometer simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate every observable along one parameter.
    Sweep(SweepArgs),
    /// Write the curve families of the coherence, visibility and SNR figures.
    Figure(FigureArgs),
    /// Optimal crystal-B gain, or arm attenuation for a given gain.
    Optimize(OptimizeArgs),
    /// Cross-check the Fock oracle, the Gaussian engine and the closed forms.
    Validate(ValidateArgs),
}

#[derive(Debug, Args, Default)]
pub struct SetupArgs {
    /// Mean photon number of crystal A.
    #[arg(long)]
    pub va: Option<f64>,
    /// Mean photon number of crystal B.
    #[arg(long)]
    pub vb: Option<f64>,
    /// Idler filter transmittance.
    #[arg(long)]
    pub t: Option<f64>,
    /// Transmittance of crystal B's signal arm.
    #[arg(long)]
    pub t2: Option<f64>,
    /// Interferometer phase (fringes go as cos 2phi).
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Number of averaged pulses.
    #[arg(long)]
    pub pulses: Option<u32>,
}

#[derive(Debug, Args, Default)]
pub struct OutputArgs {
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value file supplying defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// One of vA, vB, T, phi, T2, tau.
    #[arg(long)]
    pub param: Option<String>,
    /// start:stop:count
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// For tau sweeps: absorption (phi=0, T=tau) or phase (T=1).
    #[arg(long)]
    pub vary: Option<String>,
    #[command(flatten)]
    pub setup: SetupArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// coherence, visibility or snr.
    pub id: String,
    /// Comma-separated crystal-A gains, one curve family each.
    #[arg(long, value_delimiter = ',')]
    pub gains: Vec<f64>,
    /// Grid points on [0, 1].
    #[arg(long)]
    pub points: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub setup: SetupArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fock cutoff per mode (levels 0..=cutoff).
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Largest squeezing parameter sampled for the oracle suite.
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn load_config(output: &OutputArgs) -> Result<Config, CliError> {
    match &output.config {
        Some(path) => Config::load(path),
        None => Ok(Config::default()),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(
    command: Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match command {
        Command::Sweep(args) => sweep::cmd_sweep(&args, stdout),
        Command::Figure(args) => figure::cmd_figure(&args, stdout),
        Command::Optimize(args) => optimize::cmd_optimize(&args, stdout),
        Command::Validate(args) => validate::cmd_validate(&args, stdout, stderr),
    }
}
