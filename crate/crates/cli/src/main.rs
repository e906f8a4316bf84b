//! `afav`: build, serialize, run and cross-check affine verifiers.
//!
//! Exit status: 0 accept, 1 reject, 2 inconclusive, 3 usage, 4 bad parameter,
//! 5 unreadable machine or language file, 6 invalid input, 7 resource limit,
//! 8 I/O, 9 internal check failed.

mod commands;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use afav_core::gadgets::SquareVariant;
use afav_core::Rational;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "afav", version, about = "Exact simulator for affine finite automata as Arthur-Merlin verifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Engine and report flags shared by every command that runs a machine.
#[derive(Debug, Args)]
pub struct RunFlags {
    /// Keep configurations that coincide instead of merging them.
    #[arg(long)]
    pub no_dedup: bool,
    /// Drop paths early when a certified bound allows it.
    #[arg(long)]
    pub prune: bool,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Print one line per path.
    #[arg(long)]
    pub list_paths: bool,
    /// Cap on live configurations.
    #[arg(long, env = "AFAV_BUDGET")]
    pub budget: Option<usize>,
    /// Worker threads for wide frontiers.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a machine file on an input.
    Run {
        file: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        /// Error bound, as an exact fraction.
        #[arg(long)]
        epsilon: Rational,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Subset-sum verifier on `S#B1#...#Bk` (binary numbers).
    Subsetsum {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        input: String,
        /// Defaults to 1/(2t+1).
        #[arg(long)]
        epsilon: Option<Rational>,
        /// Compare with the subset-sum oracle.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Square-length verifier on 0^n.
    Usquare {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        epsilon: Option<Rational>,
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Polynomial-image verifier on 0^n.
    Upoly {
        /// Coefficients from the constant term up, e.g. `0,1,1`.
        #[arg(long, value_delimiter = ',', required = true)]
        coeffs: Vec<u64>,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        epsilon: Option<Rational>,
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Verifier for a unary language given by a spec file, on a^n.
    Unary {
        #[arg(long)]
        lang: PathBuf,
        /// Defaults to the value derived from the base.
        #[arg(long)]
        k: Option<Rational>,
        #[arg(long)]
        n: u64,
        /// Defaults to the error target of the base.
        #[arg(long)]
        epsilon: Option<Rational>,
        /// Truncation depth; runs the language through interval enclosures.
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Apply an encoding gadget and compare with its closed form.
    Gadget {
        #[command(subcommand)]
        kind: GadgetKind,
    },
    /// Write a protocol machine in the machine-file format.
    Emit {
        #[command(subcommand)]
        target: EmitTarget,
        /// Output file; standard output when absent.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GadgetKind {
    /// Binary encoding of a bit string.
    Binary {
        #[arg(long)]
        w: String,
    },
    /// Counter (1, l, -l).
    Count1 {
        #[arg(long)]
        steps: u64,
    },
    /// Counter (1-l, l).
    Count2 {
        #[arg(long)]
        steps: u64,
    },
    /// Square gadget.
    Square {
        #[arg(long)]
        steps: u64,
        /// dim4, dim4-doubled, dim3 or tensor.
        #[arg(long, default_value = "dim4")]
        variant: SquareVariant,
    },
    /// Polynomial gadget.
    Poly {
        #[arg(long, value_delimiter = ',', required = true)]
        coeffs: Vec<u64>,
        #[arg(long)]
        steps: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum EmitTarget {
    Subsetsum {
        #[arg(long)]
        t: u64,
    },
    Usquare {
        #[arg(long)]
        t: u64,
    },
    Upoly {
        #[arg(long, value_delimiter = ',', required = true)]
        coeffs: Vec<u64>,
        #[arg(long)]
        t: u64,
    },
    /// Periodic languages only; predicate-backed ones have no exact form.
    Unary {
        #[arg(long)]
        lang: PathBuf,
        #[arg(long)]
        k: Option<Rational>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Run { file, input, epsilon, flags } => commands::run(&file, &input, &epsilon, &flags),
        Command::Subsetsum { t, input, epsilon, check, flags } => {
            commands::subsetsum(t, &input, epsilon, check, &flags)
        }
        Command::Usquare { t, n, epsilon, check, flags } => {
            commands::polynomial(None, t, n, epsilon, check, &flags)
        }
        Command::Upoly { coeffs, t, n, epsilon, check, flags } => {
            commands::polynomial(Some(coeffs), t, n, epsilon, check, &flags)
        }
        Command::Unary { lang, k, n, epsilon, precision, check, flags } => {
            commands::unary(&lang, k, n, epsilon, precision, check, &flags)
        }
        Command::Gadget { kind } => commands::gadget(kind),
        Command::Emit { target, output } => commands::emit(target, output.as_deref()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
