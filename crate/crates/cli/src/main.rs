//! netgrow: grow graphs by controllability-preserving attachment, analyze
//! controllability of the whiskered variants, and verify the Gramian trace
//! bounds.
//!
//! Exit codes:
//!   0  success
//!   2  parse error (graph file, input spec, bad dimensions)
//!   3  disconnected seed graph
//!   4  relaxation hit its iteration cap (outputs are still written)
//!   5  bound/supermodularity violations found (witness serialized)

mod analyze;
mod check;
mod grow;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DISCONNECTED: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;
pub const EXIT_VIOLATIONS: i32 = 5;

#[derive(Parser)]
#[command(
    name = "netgrow",
    about = "Controllability-preserving graph growth experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exhaustive,
    Relaxation,
    Heuristic,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ClusterArg {
    Leaf,
    Path2,
}

#[derive(Subcommand)]
enum Command {
    /// Iteratively attach clusters to maximize algebraic connectivity;
    /// writes trajectory.csv, report.json and per-iteration DOT files.
    Grow {
        /// Seed graph edge-list file ("u v" per line, 1-based, # comments).
        #[arg(long)]
        seed: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, value_enum)]
        cluster: ClusterArg,
        #[arg(long)]
        iterations: usize,
        /// Ground (leader) node for Gramian traces and bounds.
        #[arg(long, default_value_t = 1)]
        ground: usize,
        /// Numerical tolerance for rank and orthogonality tests.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Controllability and bound analysis of one graph/input pair; prints a
    /// JSON report.
    Analyze {
        #[arg(long)]
        graph: PathBuf,
        /// Input vector: "e<i>" for a standard basis vector, or a
        /// comma-separated list of values.
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, default_value_t = 1)]
        ground: usize,
        /// Also write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized supermodularity trials plus the full set of Gramian
    /// bound checks; exits 5 when any inequality fails.
    CheckBounds {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        /// Also write violations (if any) to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_violation: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Grow {
            seed,
            method,
            cluster,
            iterations,
            ground,
            tol,
            rng_seed,
            out,
        } => grow::run(&seed, method, cluster, iterations, ground, tol, rng_seed, &out),
        Command::Analyze {
            graph,
            input,
            tol,
            ground,
            out,
        } => analyze::run(&graph, &input, tol, ground, out.as_deref()),
        Command::CheckBounds {
            graph,
            trials,
            rng_seed,
            out,
            inject_violation,
        } => check::run(&graph, trials, rng_seed, out.as_deref(), inject_violation),
    };
    std::process::exit(code);
}

/// Read and parse an edge-list file, mapping failures to exit code 2.
pub fn load_graph(path: &std::path::Path) -> Result<netgrow::Laplacian, i32> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })?;
    netgrow::Laplacian::from_edge_list_text(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_PARSE
    })
}
