use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wvlab::config::{ExperimentConfig, ExperimentKind};
use wvlab::{runner, Error, Result};

/// Growth and frequent-hypercyclicity experiments for power series.
///
/// Each subcommand runs one experiment from a JSON config and writes its
/// CSV/JSON artifacts plus a manifest into the output directory. Re-running
/// with the same config and seed reproduces every CSV byte for byte.
#[derive(Parser)]
#[command(name = "wvlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Profile the growth functionals of a series over a radius grid.
    Growth(RunArgs),
    /// Check a deterministic maximum-modulus bound outside an exceptional set.
    WvCheck(RunArgs),
    /// Monte Carlo suite for a randomized maximum-modulus bound.
    Levy(RunArgs),
    /// Sup-norm exceedance experiment for random trigonometric polynomials.
    Kahane(RunArgs),
    /// Apply a weighted backward shift repeatedly and dump the result.
    Shift(RunArgs),
    /// Hitting-density estimate for a random frequently hypercyclic function.
    FhcDensity(RunArgs),
    /// Growth check of a random frequently hypercyclic function.
    FhcGrowth(RunArgs),
}

impl Command {
    fn split(self) -> (ExperimentKind, RunArgs) {
        match self {
            Command::Growth(a) => (ExperimentKind::Growth, a),
            Command::WvCheck(a) => (ExperimentKind::WvCheck, a),
            Command::Levy(a) => (ExperimentKind::Levy, a),
            Command::Kahane(a) => (ExperimentKind::Kahane, a),
            Command::Shift(a) => (ExperimentKind::Shift, a),
            Command::FhcDensity(a) => (ExperimentKind::FhcDensity, a),
            Command::FhcGrowth(a) => (ExperimentKind::FhcGrowth, a),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config's `out`. Defaults to ./wvlab-out.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed; overrides the config's `master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Trial count; overrides the config's `trials`.
    #[arg(long)]
    trials: Option<usize>,
}

fn run(kind: ExperimentKind, args: RunArgs) -> Result<Vec<PathBuf>> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(declared) = cfg.experiment {
        if declared != kind {
            return Err(Error::Config {
                path: "experiment".into(),
                message: format!("config declares `{declared}`, invoked as `{kind}`"),
            });
        }
    }
    if let Some(seed) = args.seed {
        cfg.master_seed = Some(seed);
    }
    if let Some(trials) = args.trials {
        cfg.trials = Some(trials);
    }
    if let Some(out) = args.out {
        cfg.out = Some(out);
    }
    let out_dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("wvlab-out"));
    let outcome = runner::run(kind, &cfg, &out_dir)?;
    Ok(outcome.artifacts)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.command.split();
    match run(kind, args) {
        Ok(paths) => {
            for path in paths {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
