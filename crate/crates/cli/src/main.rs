//! `qtree`: generator sets, fermion maps and circuit simulation from qubit trees.
//!
//! Exit codes: 0 success, 1 a validation verdict failed, 2 input error.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use report::{Format, RunReport};

#[derive(Parser, Debug)]
#[command(
    name = "qtree",
    version,
    about = "Clifford generators, fermion maps and quadratic circuits on qubit trees"
)]
struct Cli {
    /// Output format (default: csv for occupation and simulate, text otherwise).
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Write the main output to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a tree as a tree file.
    Tree {
        /// Builder spec (cf-ternary:L, cf-binary:L, cf-xz:L, jw:m, bk:m) or tree file path.
        source: String,
    },
    /// List and validate the generator set of a tree.
    Gen {
        source: String,
        /// Confirm anticommutation on a random dense state.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List the ladder operators of a tree encoding.
    Ladder {
        source: String,
        /// Check the anticommutation relations and vacuum with dense matrices.
        #[arg(long)]
        oracle: bool,
    },
    /// Occupation-map table: node, kind, c(j), s(j), D(j).
    Occupation { source: String },
    /// Apply the occupation map to bit vectors.
    Map {
        source: String,
        /// Bit vectors such as 0110, one character per node in id order.
        bits: Vec<String>,
        /// Map physical bits to encoded bits (default).
        #[arg(long, conflicts_with = "inverse")]
        forward: bool,
        /// Map encoded bits back to physical bits.
        #[arg(long)]
        inverse: bool,
        /// Enumerate all 2^m vectors (m <= 12).
        #[arg(long)]
        all: bool,
        /// Sample this many random vectors.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a circuit file.
    Simulate {
        circuit: PathBuf,
        /// Cross-check every step against dense evolution (m <= 10).
        #[arg(long)]
        oracle: bool,
        /// Largest accepted oracle deviation.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

fn dispatch(cli: &Cli, echo: String) -> Result<RunReport> {
    match &cli.command {
        Command::Tree { source } => commands::tree(echo, source),
        Command::Gen {
            source,
            oracle,
            seed,
        } => commands::gen(echo, source, *oracle, *seed),
        Command::Ladder { source, oracle } => commands::ladder(echo, source, *oracle),
        Command::Occupation { source } => commands::occupation(echo, source),
        Command::Map {
            source,
            bits,
            inverse,
            all,
            random,
            seed,
            ..
        } => commands::map(
            echo,
            commands::MapArgs {
                source,
                bits,
                inverse: *inverse,
                all: *all,
                random: *random,
                seed: *seed,
            },
        ),
        Command::Simulate {
            circuit,
            oracle,
            tol,
        } => commands::simulate(echo, circuit, *oracle, *tol),
    }
}

fn default_format(command: &Command) -> Format {
    match command {
        Command::Occupation { .. } | Command::Simulate { .. } => Format::Csv,
        _ => Format::Text,
    }
}

fn emit(cli: &Cli, report: &RunReport) -> Result<()> {
    let (main, trailer) = report.render(cli.format.unwrap_or_else(|| default_format(&cli.command)));
    match &cli.output {
        Some(path) => {
            std::fs::write(path, main).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().write_all(main.as_bytes())?,
    }
    std::io::stderr().write_all(trailer.as_bytes())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::env::args().collect::<Vec<_>>().join(" ");
    match dispatch(&cli, echo).and_then(|r| emit(&cli, &r).map(|_| r)) {
        Ok(report) if report.passed() => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
