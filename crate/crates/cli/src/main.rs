//! `reflectode` command-line front end.

mod commands;
mod error;
mod problem;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::problem::Overrides;

#[derive(Debug, Parser)]
#[command(
    name = "reflectode",
    version,
    about = "Solve x'(t) + m x(-t) = h(t) on [-T, T] with Green's functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a problem file and write the solution on a uniform grid as CSV.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Number of grid intervals.
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate a Green's function on a lattice as CSV.
    Green {
        #[arg(long, value_enum)]
        kind: GreenKind,
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long = "T")]
        half_length: f64,
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Positivity constants and certificate for a functional problem, as JSON.
    Positivity {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Also search for the smallest c giving a nonnegative solution.
        #[arg(long)]
        threshold: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the kernel property checks; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum)]
        kind: VerifyKind,
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long = "T")]
        half_length: f64,
        #[arg(long)]
        abs_tol: Option<f64>,
        #[arg(long)]
        rel_tol: Option<f64>,
        /// Print a table instead of JSON.
        #[arg(long)]
        table: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// JSON problem file.
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Override the right-hand side c of a functional condition.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Override the jump of a lambda condition.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
}

impl ProblemArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            c: self.c,
            lambda: self.lambda,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GreenKind {
    Gbar,
    Hbar,
    H,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifyKind {
    Periodic,
    Antiperiodic,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("REFLECTODE_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { problem, grid, out } => {
            commands::solve(&problem.problem, &problem.overrides(), grid, out.as_deref())
        }
        Command::Green {
            kind,
            m,
            half_length,
            grid,
            out,
        } => commands::green(kind, m, half_length, grid, out.as_deref()),
        Command::Positivity {
            problem,
            threshold,
            out,
        } => commands::positivity(&problem.problem, &problem.overrides(), threshold, out.as_deref()),
        Command::Verify {
            kind,
            m,
            half_length,
            abs_tol,
            rel_tol,
            table,
            out,
        } => {
            let kind = match kind {
                VerifyKind::Periodic => reflectode::KernelKind::Periodic,
                VerifyKind::Antiperiodic => reflectode::KernelKind::Antiperiodic,
            };
            commands::verify(kind, m, half_length, abs_tol, rel_tol, table, out.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
