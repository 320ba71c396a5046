//! `hopfcalc`: homology of finite and nilpotent groups through two independent
//! engines, Galois structures of extensions, and the property suites.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{cmd_galois, cmd_homology, cmd_verify, Abort, GaloisArgs, HomologyArgs, VerifyArgs};
use report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "hopfcalc", version, about)]
struct Cli {
    /// Print the full JSON report instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integral homology in degree 1, 2 or 3.
    Homology(HomologyArgs),
    /// Galois-theoretic properties of a surjective homomorphism.
    Galois(GaloisArgs),
    /// Seeded property suites over the corpus.
    Verify(VerifyArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut report = RunReport::new(std::env::args().skip(1).collect());
    let outcome = match &cli.command {
        Command::Homology(a) => cmd_homology(a, &mut report),
        Command::Galois(a) => cmd_galois(a, &mut report),
        Command::Verify(a) => cmd_verify(a, &mut report),
    };
    match outcome {
        Ok(()) => {}
        Err(Abort::Failed(msg)) => report.fail(msg),
        Err(Abort::Error(msg)) => report.error(msg),
    }
    if cli.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("reports serialize")
        );
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(report.status.exit_code() as u8)
}
