//! `mfl` — mobile facility location from the command line.
//!
//! Solve instances by local search, compute exact optima by enumeration,
//! generate instance families, verify solution pairs against exact
//! structural inequalities, and benchmark solver quality against the
//! exact oracle. Every command writes a manifest with input and output
//! hashes so runs can be reproduced and compared byte-for-byte.

mod commands;
mod runio;

use clap::Parser;

use commands::{BenchArgs, ExactArgs, GenCommand, SolveArgs, VerifyArgs};

#[derive(Debug, Parser)]
#[command(
    name = "mfl",
    version,
    about = "Mobile facility location: local-search solver, exact oracle, verifier, generators",
    after_help = "Exit codes: 0 success/certified/pass; 1 invalid input or failed \
                  verification; 2 solve finished uncertified; 3 exact oracle refused.\n\
                  MFL_JOBS sets the default worker count. Use '-' to pipe JSON via \
                  stdin/stdout; the manifest then goes to stderr."
)]
enum Cli {
    /// Run multi-swap local search on an instance
    Solve(SolveArgs),
    /// Enumerate all destination sets and report an exact optimum
    Exact(ExactArgs),
    /// Generate instances
    #[command(subcommand)]
    Gen(GenCommand),
    /// Check a (local, reference) solution pair against exact structural
    /// inequalities
    Verify(VerifyArgs),
    /// Compare local search against the exact oracle over random instances
    Bench(BenchArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli {
        Cli::Solve(args) => commands::cmd_solve(args),
        Cli::Exact(args) => commands::cmd_exact(args),
        Cli::Gen(cmd) => commands::cmd_gen(cmd),
        Cli::Verify(args) => commands::cmd_verify(args),
        Cli::Bench(args) => commands::cmd_bench(args),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}
