//! `gss`: analyze and run graph-based secret sharing from the command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 graph too large for an
//! exhaustive command, 4 share file dealt on a different graph, 5 coalition
//! not authorized, 6 audit found a mismatch.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "gss",
    version,
    about = "Graph-based secret sharing: access structures, dealing, audits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the access structure: counts and minimal authorized sets.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Include the witness or dual witness of every subset.
        #[arg(long)]
        with_witnesses: bool,
    },
    /// Decide one coalition, with its certificate and security report.
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        set: String,
    },
    /// Deal shares of a one-bit secret and write the share file.
    Share {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        secret: u8,
        /// Explicit key bits, player 0 first, e.g. 01101.
        #[arg(long, conflicts_with = "seed")]
        keys: Option<String>,
        /// Seed for the key generator.
        #[arg(long)]
        seed: Option<u64>,
        /// Store the secret in the share file (testing only).
        #[arg(long)]
        reveal: bool,
        /// Write the share file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the secret from the shares of a coalition.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        shares: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Exhaustively check that every coalition is decodable or learns nothing,
    /// in agreement with the access decision.
    AuditSecurity {
        #[command(flatten)]
        common: Common,
        /// Flip adjacency bit ROW,COL in the decision system (negative control).
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Quantum-secret verdict of one coalition.
    Quantum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        set: String,
    },
    /// Check both quantum reductions agree and no set and its complement are both authorized.
    AuditQuantum {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Edge-list file.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            if let Some(output) = &err.output {
                print!("{output}");
            }
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
