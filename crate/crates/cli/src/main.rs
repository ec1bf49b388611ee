use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use triwalk_cli::commands::{self, RunContext};
use triwalk_cli::config::{ExperimentConfig, OutputFormat};
use triwalk_cli::error::{CliError, Result};

/// Simulator for continuous-time quantum walks of one and two photons on
/// 2D triangular photonic lattices.
///
/// Exit codes: 0 success, 2 config error, 3 numerical failure.
#[derive(Parser)]
#[command(name = "triwalk", version, about, max_term_width = 100)]
struct Cli {
    /// Experiment config (TOML). Required by every subcommand except
    /// fit-coupling, and by certify only when no counts file is given.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override the config seed.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Output directory (overrides the config).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Tabular output format (overrides the config).
    #[arg(long, global = true, value_enum, value_name = "FMT")]
    format: Option<FormatArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> OutputFormat {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the lattice and write its JSON description and diagram.
    Lattice,
    /// Single-photon output distributions for the configured input ports.
    Evolve,
    /// Quantum, classical, and partially distinguishable correlation
    /// matrices for the configured input pair.
    Correlate,
    /// Delay scan of one correlation entry with a visibility report.
    Hom,
    /// Cauchy-Schwarz violation map.
    ///
    /// With --counts, certifies a sampled coincidence file; significances
    /// are always computed from the raw counts (efficiency corrections
    /// apply only to correlation estimates). Without --counts, the exact
    /// quantum correlations of the configured walk are used.
    Certify {
        /// Counts CSV produced by the sample subcommand.
        #[arg(long, value_name = "PATH")]
        counts: Option<PathBuf>,
    },
    /// Draw synthetic coincidence counts through the detection model.
    Sample,
    /// Fit the exponential coupling model to measured samples.
    FitCoupling {
        /// CSV of separation_um,coupling_per_mm samples.
        #[arg(long, value_name = "PATH")]
        samples: PathBuf,
    },
}

fn run(cli: Cli) -> Result<Vec<PathBuf>> {
    // fit-coupling runs without a config; everything else loads one.
    if let Command::FitCoupling { samples } = &cli.command {
        let out = cli.out.unwrap_or_else(|| PathBuf::from("out"));
        return commands::cmd_fit_coupling(samples, &out);
    }

    let config_path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::config("--config is required for this subcommand"))?;
    let (config, hash) = ExperimentConfig::load(config_path)?;
    let ctx = RunContext::new(config, hash, cli.out, cli.format.map(Into::into), cli.seed);

    match cli.command {
        Command::Lattice => commands::cmd_lattice(&ctx),
        Command::Evolve => commands::cmd_evolve(&ctx),
        Command::Correlate => commands::cmd_correlate(&ctx),
        Command::Hom => commands::cmd_hom(&ctx),
        Command::Certify { counts } => commands::cmd_certify(&ctx, counts.as_deref()),
        Command::Sample => commands::cmd_sample(&ctx),
        Command::FitCoupling { .. } => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(written) => {
            for path in written {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("triwalk: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
