use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orbitkit::report::{Analysis, Failure, Options};

#[derive(Parser)]
#[command(
    name = "orbitkit",
    version,
    about = "Orbit-method toolkit for rational nilpotent Lie groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(clap::Args)]
struct Sampling {
    /// Monte Carlo samples for the tiling check.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Random seed; `ORBITKIT_SEED` takes precedence.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structure constants and the dilation.
    Validate { file: PathBuf },
    /// Generic orbit data: e, j, d and the Pfaffian.
    Orbit { file: PathBuf },
    /// Dilation flags and the closure of Γ_α.
    Dilation { file: PathBuf },
    /// Decomposition case of the wavelet representation.
    Classify { file: PathBuf },
    /// Band tiling and its Monte Carlo check.
    Tiling {
        file: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Irreducibility verdict for the fibers.
    Irreducibility { file: PathBuf },
    /// Numerical checks of the representation identities.
    VerifyIdentities {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Full report.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        sampling: Sampling,
    },
}

fn seed_override(seed: u64) -> Result<u64, Failure> {
    match std::env::var("ORBITKIT_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Precondition(format!("ORBITKIT_SEED is not an unsigned integer: {v:?}"))),
        Err(_) => Ok(seed),
    }
}

fn load(path: &PathBuf) -> Result<Analysis, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Precondition(format!("cannot read {}: {e}", path.display())))?;
    Analysis::from_text(&text)
}

fn hard_failure(ok: bool, what: &str) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Internal(format!("{what} failed")))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { file } => {
            let a = load(&file)?;
            print!("{}", a.validate_text());
            if let Some(s) = &a.dilation {
                if !s.is_automorphism {
                    return Err(Failure::Validation(format!("dilation is not an automorphism: {s}")));
                }
            }
            if a.lattice_closes == Some(false) {
                return Err(Failure::Validation("lattice is not closed under multiplication".into()));
            }
        }
        Command::Orbit { file } => print!("{}", load(&file)?.orbit_text()),
        Command::Dilation { file } => {
            let a = load(&file)?;
            print!("{}", a.dilation_text()?);
            a.require_automorphism()?;
        }
        Command::Classify { file } => print!("{}", load(&file)?.classify_text()?),
        Command::Tiling { file, sampling } => {
            let opts = Options {
                seed: seed_override(sampling.seed)?,
                tiling_samples: sampling.samples,
                ..Options::default()
            };
            let (text, ok) = load(&file)?.tiling_text(&opts)?;
            print!("{text}");
            hard_failure(ok, "tiling verification")?;
        }
        Command::Irreducibility { file } => print!("{}", load(&file)?.irreducibility_text()?),
        Command::VerifyIdentities { file, samples, seed } => {
            let opts = Options {
                seed: seed_override(seed)?,
                identity_samples: samples,
                ..Options::default()
            };
            let (text, ok) = load(&file)?.identities_text(&opts)?;
            print!("{text}");
            hard_failure(ok, "identity verification")?;
        }
        Command::Report { file, format, sampling } => {
            let opts = Options {
                seed: seed_override(sampling.seed)?,
                tiling_samples: sampling.samples,
                ..Options::default()
            };
            let a = load(&file)?;
            let (text, ok) = match format {
                Format::Text => a.text(&opts),
                Format::Structured => a.structured(&opts),
            };
            print!("{text}");
            if let Some(s) = &a.dilation {
                if !s.is_automorphism {
                    return Err(Failure::Validation("dilation is not an automorphism".into()));
                }
            }
            hard_failure(ok, "verification")?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
