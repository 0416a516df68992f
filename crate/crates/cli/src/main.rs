mod commands;
mod error;
mod io;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::{bench, export, generate, profile, slackdist, solve, verify};

/// Certified SAT/UNSAT instance generation matched to a target corpus.
#[derive(Debug, Parser)]
#[command(name = "satforge", version)]
struct Cli {
    /// Log filter, e.g. `warn` or `debug`; overrides RUST_LOG.
    #[arg(long, global = true, default_value = "info")]
    log: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract a profile (widths, skew, slacks) from a labeled corpus.
    Profile(profile::Args),
    /// Generate a dataset of certified instances.
    Generate(generate::Args),
    /// Check every instance of a manifest.
    Verify(verify::Args),
    /// Write variable/slack graph files for every instance of a manifest.
    Export(export::Args),
    /// Per-width slack histograms of a dataset or corpus as CSV.
    Slackdist(slackdist::Args),
    /// Time planted generation against generate-and-test baselines.
    Bench(bench::Args),
    /// Label one DIMACS file by exhaustive enumeration (exit 10 SAT, 20 UNSAT).
    Solve(solve::Args),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    env_logger::Builder::new()
        .parse_filters(&cli.log)
        .format_timestamp(None)
        .init();
    let result = match cli.command {
        Command::Profile(a) => profile::run(a),
        Command::Generate(a) => generate::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Export(a) => export::run(a),
        Command::Slackdist(a) => slackdist::run(a),
        Command::Bench(a) => bench::run(a),
        Command::Solve(a) => return solve::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
