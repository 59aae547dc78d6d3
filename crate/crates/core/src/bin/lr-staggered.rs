//! Command-line driver.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lr_staggered::config::RunConfig;
use lr_staggered::run::{run, Command};
use lr_staggered::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "lr-staggered", version, about = "Collective-sector dynamics of a long-range antiferromagnet in a staggered field")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for Monte Carlo ensembles.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Log progress to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Eigenstate scan table.
    Spectrum,
    /// Observable time series.
    Evolve,
    /// Bohr line list and binned profile.
    Fourier,
    /// Diagonal vs microcanonical averages at fixed energy.
    Ensembles,
    /// Husimi Q grid.
    Husimi,
    /// Entanglement entropy vs energy and scar flags.
    Entropy,
    /// Form factor, quasiparticle energies and subspace census.
    Meanfield,
    /// Small-size full-chain oracle.
    Brute,
    /// Timescale sweep and fitted exponents.
    Timescales,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Evolve => Command::Evolve,
            Cmd::Fourier => Command::Fourier,
            Cmd::Ensembles => Command::Ensembles,
            Cmd::Husimi => Command::Husimi,
            Cmd::Entropy => Command::Entropy,
            Cmd::Meanfield => Command::Meanfield,
            Cmd::Brute => Command::Brute,
            Cmd::Timescales => Command::Timescales,
        }
    }
}

fn execute(cli: &Cli) -> Result<Vec<PathBuf>> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => return Err(Error::Usage("--config <path> is required".into())),
    };
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    cfg.validate()?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
    }
    run(cli.command.into(), &cfg, &cli.out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match execute(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
