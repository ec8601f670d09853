use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graphkss::experiments::{exit_code, run_experiment, ExperimentKind, RunOptions};

#[derive(Parser)]
#[command(name = "graphkss", version, about = "Kernel Stein goodness-of-fit tests for random graph models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rejection rates over a grid of alternative models.
    PowerCurve(Common),
    /// Test an observed network against a directory of generator samples.
    AssessSamples(Common),
    /// Runtime of the resampled statistic per kernel.
    RuntimeBench(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common) = match cli.command {
        Command::PowerCurve(c) => (ExperimentKind::PowerCurve, c),
        Command::AssessSamples(c) => (ExperimentKind::AssessSamples, c),
        Command::RuntimeBench(c) => (ExperimentKind::RuntimeBench, c),
    };
    let opts = RunOptions {
        out: common.out,
        seed: common.seed,
        workers: common.workers,
    };
    match run_experiment(kind, &common.config, &opts) {
        Ok(()) => {
            eprintln!("{}: wrote {}", kind.name(), opts.out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
