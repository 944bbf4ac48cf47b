use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use laplace_deconv::harness::{study, ExperimentConfig, HarnessError};

#[derive(Parser)]
#[command(
    name = "laplace-deconv",
    version,
    about = "Adaptive Laplace deconvolution under long-range dependence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derivative-kernel utilities.
    Kernels {
        #[command(subcommand)]
        action: KernelsAction,
    },
    /// Error-process utilities.
    Noise {
        #[command(subcommand)]
        action: NoiseAction,
    },
    /// Simulate one data set, estimate f and write the Lepski diagnostics.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo convergence-rate study.
    RateStudy {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lepski threshold tail study and fixed-bandwidth oracle comparison.
    LepskiStudy {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum KernelsAction {
    /// Print the moment conformance table as CSV.
    Check {
        #[arg(long = "Lmax", default_value_t = 8)]
        lmax: usize,
    },
}

#[derive(Subcommand)]
enum NoiseAction {
    /// Extreme covariance eigenvalues of fGn as CSV.
    Eigs {
        #[arg(long)]
        alpha: f64,
        /// Comma-separated sample sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Kernels {
            action: KernelsAction::Check { lmax },
        } => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            study::kernel_check(lmax, &mut lock)?;
            lock.flush()?;
        }
        Command::Noise {
            action: NoiseAction::Eigs { alpha, n },
        } => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            study::noise_eigs(alpha, &n, &mut lock)?;
            lock.flush()?;
        }
        Command::Simulate { config, seed, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            for path in study::simulate_to_files(&cfg, seed, &out)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::RateStudy { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            for rep in study::rate_study(&cfg, &out)? {
                match rep.fit {
                    Some(fit) if fit.slope_se.is_finite() => eprintln!(
                        "alpha = {}: fitted exponent {:.3} ± {:.3}, theory {:.3}",
                        rep.alpha, fit.slope, fit.slope_se, rep.theoretical_exponent
                    ),
                    Some(fit) => eprintln!(
                        "alpha = {}: fitted exponent {:.3} (two sizes, no error bar), theory {:.3}",
                        rep.alpha, fit.slope, rep.theoretical_exponent
                    ),
                    None => eprintln!("alpha = {}: too few sample sizes to fit", rep.alpha),
                }
            }
            eprintln!("wrote {}", out.display());
        }
        Command::LepskiStudy { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            study::lepski_study(&cfg, &out)?;
            eprintln!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
