//! `maxpoly`: build, solve, certify, relax and render largest small polygons.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Largest small polygons with an even number of vertices.
#[derive(Debug, Parser)]
#[command(name = "maxpoly", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SizeArgs {
    /// Number of vertices (even, 4..=24).
    n: usize,
    /// Accept n above 24 (basis sizes grow quickly).
    #[arg(long)]
    allow_large_n: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the quadratic program as JSON.
    Build {
        #[command(flatten)]
        size: SizeArgs,
        /// Identify x_{2i+1} with x_{2i} (symmetric program).
        #[arg(long)]
        symmetric: bool,
        /// State the closing edge as <= 1 instead of = 1.
        #[arg(long)]
        relax_closing_edge: bool,
        /// Force the x2 >= x3 cut on (default: only for n = 8).
        #[arg(long, overrides_with = "no_order_cut")]
        order_cut: bool,
        #[arg(long)]
        no_order_cut: bool,
        /// Keep the pairs around the pendant vertex implied by the bounds.
        #[arg(long)]
        include_bound_implied: bool,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the program by deterministic multistart local optimization.
    Solve {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long)]
        symmetric: bool,
        /// Number of starts.
        #[arg(long, default_value_t = 64)]
        starts: usize,
        /// Seed for the start perturbations.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the result document instead of the summary.
        #[arg(long)]
        json: bool,
        /// Write the result document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a stored solution with interval arithmetic.
    Certify {
        /// A maxpoly-result/1 document.
        result: PathBuf,
        #[arg(long)]
        json: bool,
        /// Certificate output (default: <result stem>.cert.json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a moment relaxation, report its size, export it, or read back moments.
    Relax {
        #[command(flatten)]
        size: SizeArgs,
        /// Relaxation order.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=3))]
        order: u8,
        #[arg(long)]
        symmetric: bool,
        /// Write SDPA sparse format here (sidecar: <file>.moments.json).
        #[arg(long)]
        sdpa: Option<PathBuf>,
        /// Print moment and block counts.
        #[arg(long)]
        stats: bool,
        /// Read a moment vector (whitespace or comma separated, constant omitted)
        /// and report bound, ranks and candidate.
        #[arg(long)]
        moments: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Render a result or polygon document as SVG with its diameter graph.
    Render {
        /// A maxpoly-result/1 or polygon document.
        input: PathBuf,
        /// SVG output (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Distance tolerance for diameter-graph edges.
        #[arg(long, default_value_t = maxpoly::geometry::DEFAULT_GRAPH_TOL)]
        tol: f64,
    },
    /// Re-run the published instances and compare against the reference table.
    Reproduce {
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 64)]
        starts: usize,
    },
}

fn run(cli: Cli) -> error::CliResult {
    use commands::*;
    match cli.command {
        Command::Build {
            size,
            symmetric,
            relax_closing_edge,
            order_cut,
            no_order_cut,
            include_bound_implied,
            out,
        } => {
            let n = check_n(size.n, size.allow_large_n)?;
            let cut = if order_cut {
                Some(true)
            } else if no_order_cut {
                Some(false)
            } else {
                None
            };
            build(n, symmetric, relax_closing_edge, cut, include_bound_implied, out.as_deref())
        }
        Command::Solve {
            size,
            symmetric,
            starts,
            seed,
            json,
            out,
        } => {
            let n = check_n(size.n, size.allow_large_n)?;
            solve(n, symmetric, starts, seed, json, out.as_deref())
        }
        Command::Certify { result, json, out } => certify(&result, json, out.as_deref()),
        Command::Relax {
            size,
            order,
            symmetric,
            sdpa,
            stats,
            moments,
            json,
        } => {
            let n = check_n(size.n, size.allow_large_n)?;
            relax(RelaxArgs {
                n,
                order: order as usize,
                symmetric,
                sdpa,
                stats,
                moments,
                json,
            })
        }
        Command::Render { input, out, tol } => render(&input, out.as_deref(), tol),
        Command::Reproduce { json, starts } => reproduce(json, starts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("maxpoly: {e}");
            if matches!(e, error::CliError::Usage(_)) {
                eprintln!("Usage: maxpoly <COMMAND> ... (see `maxpoly --help`)");
            }
            e.exit_code()
        }
    }
}
