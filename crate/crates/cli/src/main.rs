use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use steering_cli::{CliError, SimulateArgs};
use steering_core::protocol::Mode;
use steering_core::Family;

#[derive(Parser)]
#[command(name = "steer", version, about = "Steering thresholds, Gaussian checks and protocol simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Werner,
    #[value(alias = "iso")]
    Isotropic,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Werner => Family::Werner,
            FamilyArg::Isotropic => Family::Isotropic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Honest,
    Cheat,
}

#[derive(Subcommand)]
enum Command {
    /// Entanglement, steering and (d = 2) Bell thresholds for one dimension.
    Thresholds {
        #[arg(long)]
        d: usize,
    },
    /// CSV of thresholds for d = 2..=d-max.
    Boundary {
        #[arg(long)]
        d_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validity and steerability of a covariance matrix JSON document.
    GaussianCheck { path: PathBuf },
    /// Run the steering task and print Bob's verification report.
    Simulate {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        eta: f64,
        #[arg(long, value_enum, default_value = "honest")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1_000_000)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bob sees single-shot tomographic estimates instead of exact states.
        #[arg(long)]
        tomography_noise: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Overlap witness of the true state over Haar-random bases.
    Witness {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 100)]
        bases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Thresholds { d } => steering_cli::cmd_thresholds(d),
        Command::Boundary { d_max, out } => steering_cli::cmd_boundary(d_max, out.as_deref()),
        Command::GaussianCheck { path } => steering_cli::cmd_gaussian_check(&path),
        Command::Simulate {
            family,
            d,
            eta,
            mode,
            runs,
            seed,
            tomography_noise,
            out,
        } => {
            let args = SimulateArgs {
                family: family.into(),
                d,
                eta,
                mode: match mode {
                    ModeArg::Honest => Mode::Honest,
                    ModeArg::Cheat => Mode::Cheat,
                },
                runs,
                seed,
                tomography_noise,
            };
            steering_cli::cmd_simulate(&args, out.as_deref())
        }
        Command::Witness {
            family,
            d,
            eta,
            bases,
            seed,
        } => steering_cli::cmd_witness(family.into(), d, eta, bases, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Rejected { report, .. } = &e {
                print!("{report}");
            }
            eprintln!("steer: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
