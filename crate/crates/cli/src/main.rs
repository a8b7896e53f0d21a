use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Compile Turing machines to storage modification machine programs, run
/// either machine, and check them against each other.
#[derive(Parser, Debug)]
#[command(name = "tm2smm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a Turing machine spec into a program file.
    Compile {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a compiled program, writing the decoded trace and DOT snapshots.
    Run {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        steps: u64,
        /// Write a DOT snapshot every K steps (0 disables).
        #[arg(long, default_value_t = 0)]
        dot_every: u64,
        #[arg(long, default_value = ".")]
        dot_dir: PathBuf,
        /// Trace file; standard output when absent.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        draw: DrawArgs,
        #[arg(long, default_value_t = smm_core::smm::DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Run the reference Turing machine interpreter.
    Oracle {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Compile a spec and run both machines in lockstep.
    Diff {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        #[arg(long, default_value_t = smm_core::smm::DEFAULT_FUEL)]
        fuel: u64,
        /// Also write the report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the tape's value at every configuration matching a predicate.
    Readout {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        state: String,
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = 10)]
        base: u32,
        #[arg(long, default_value_t = smm_core::smm::DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Replay a program for some steps and dump one DOT snapshot.
    Dot {
        #[arg(long)]
        program: PathBuf,
        #[arg(long, default_value_t = 0)]
        steps: u64,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        draw: DrawArgs,
        #[arg(long, default_value_t = smm_core::smm::DEFAULT_FUEL)]
        fuel: u64,
    },
}

#[derive(Args, Debug, Clone)]
struct DrawArgs {
    /// Directions to leave out of snapshots; by default `o` and the bits.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    omit: Option<Vec<String>>,
    /// Draw every edge.
    #[arg(long, conflicts_with = "omit")]
    all_edges: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::EXIT_INPUT)
        }
    }
}
