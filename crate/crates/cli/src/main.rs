//! `semiclassica`: classical, one-loop effective, and exact quantum dynamics
//! of the 2-D anharmonic oscillator, with chaos diagnostics and a one-loop
//! verification suite. All outputs are reproducible data files; rerunning a
//! command with the same config and seed produces byte-identical bytes at any
//! worker count.

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "semiclassica", version, about)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// TOML config file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed for all pseudo-random streams.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker-thread cap. Does not change any result.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory (default: $SEMICLASSICA_OUT or the working dir).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit JSON instead of CSV.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory and write it with its energy audit.
    Simulate(commands::SimulateArgs),
    /// Record a Poincaré section of one trajectory.
    Poincare(commands::PoincareArgs),
    /// Estimate the largest Lyapunov exponent of one trajectory.
    Lyapunov(commands::LyapunovArgs),
    /// Bisect the chaos-threshold energy over a list of γ values.
    ScanThreshold(commands::ScanArgs),
    /// Compare classical, effective, and exact quantum evolution of ⟨q1⟩.
    QuantumCompare(commands::QuantumArgs),
    /// Run the one-loop verification checks (Gelfand-Yaglom vs DE2).
    OneloopCheck(commands::OneloopArgs),
}

fn main() {
    let cli = Cli::parse();

    let file = match config::FileConfig::load(cli.global.config.as_ref()) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(commands::EXIT_CONFIG);
        }
    };

    let resolved_global = commands::Global::resolve(&cli.global, file.global.as_ref());
    if let Some(threads) = resolved_global.threads {
        // Worker cap only; results are index-ordered and seed-keyed.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let outcome = match cli.command {
        Command::Simulate(args) => commands::simulate(&resolved_global, &args, &file),
        Command::Poincare(args) => commands::poincare(&resolved_global, &args, &file),
        Command::Lyapunov(args) => commands::lyapunov(&resolved_global, &args, &file),
        Command::ScanThreshold(args) => commands::scan_threshold(&resolved_global, &args, &file),
        Command::QuantumCompare(args) => commands::quantum_compare(&resolved_global, &args, &file),
        Command::OneloopCheck(args) => commands::oneloop_check(&resolved_global, &args, &file),
    };

    match outcome {
        Ok(()) => {}
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            std::process::exit(failure.code);
        }
    }
}
