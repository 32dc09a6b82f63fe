//! The `grow` subcommand: run the growth loop for one or all methods and
//! write trajectory.csv, report.json and the per-iteration DOT files.

use crate::output::{dot, trajectory_csv};
use crate::{ClusterArg, MethodArg, EXIT_DISCONNECTED, EXIT_NO_CONVERGENCE, EXIT_PARSE};
use netgrow::optimize::{grow, ClusterKind, GrowthTrajectory, Method};
use serde::Serialize;
use std::path::Path;

#[derive(Serialize)]
struct ConfigEcho {
    seed_graph_path: String,
    method: String,
    cluster: String,
    iterations: usize,
    ground: usize,
    tol: f64,
    rng_seed: u64,
    out_dir: String,
}

#[derive(Serialize)]
struct GrowReport<'a> {
    config: &'a ConfigEcho,
    trajectories: &'a [GrowthTrajectory],
}

#[allow(clippy::too_many_arguments)]
pub fn run(
    seed_path: &Path,
    method: MethodArg,
    cluster: ClusterArg,
    iterations: usize,
    ground: usize,
    tol: f64,
    rng_seed: u64,
    out_dir: &Path,
) -> i32 {
    if iterations == 0 {
        eprintln!("error: --iterations must be >= 1");
        return EXIT_PARSE;
    }
    if tol <= 0.0 {
        eprintln!("error: --tol must be positive");
        return EXIT_PARSE;
    }
    let seed = match crate::load_graph(seed_path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    if !seed.is_connected() {
        eprintln!("error: seed graph is disconnected");
        return EXIT_DISCONNECTED;
    }
    if ground < 1 || ground > seed.n() {
        eprintln!("error: ground node {ground} out of range");
        return EXIT_PARSE;
    }

    let methods: Vec<Method> = match method {
        MethodArg::Exhaustive => vec![Method::Exhaustive],
        MethodArg::Relaxation => vec![Method::Relaxation],
        MethodArg::Heuristic => vec![Method::Heuristic],
        MethodArg::All => vec![Method::Exhaustive, Method::Relaxation, Method::Heuristic],
    };
    let kind = match cluster {
        ClusterArg::Leaf => ClusterKind::Leaf,
        ClusterArg::Path2 => ClusterKind::Path2,
    };

    // Compute everything before writing anything: error exits leave no
    // partial files behind.
    let mut trajectories = Vec::with_capacity(methods.len());
    for m in &methods {
        match grow(&seed, *m, kind, iterations, rng_seed, ground) {
            Ok(t) => trajectories.push(t),
            Err(e) => {
                eprintln!("error: growth with method {m} failed: {e}");
                return 1;
            }
        }
    }

    let config = ConfigEcho {
        seed_graph_path: seed_path.display().to_string(),
        method: match method {
            MethodArg::Exhaustive => "exhaustive",
            MethodArg::Relaxation => "relaxation",
            MethodArg::Heuristic => "heuristic",
            MethodArg::All => "all",
        }
        .to_string(),
        cluster: kind.to_string(),
        iterations,
        ground,
        tol,
        rng_seed,
        out_dir: out_dir.display().to_string(),
    };

    if let Err(e) = write_outputs(out_dir, &seed, &config, &trajectories, method) {
        eprintln!("error: writing outputs: {e}");
        return 1;
    }

    let all_converged = trajectories.iter().all(|t| t.relaxation_converged);
    if !all_converged {
        eprintln!("warning: relaxation hit its iteration cap; best iterate used");
        return EXIT_NO_CONVERGENCE;
    }
    0
}

fn write_outputs(
    out_dir: &Path,
    seed: &netgrow::Laplacian,
    config: &ConfigEcho,
    trajectories: &[GrowthTrajectory],
    method: MethodArg,
) -> std::io::Result<()> {
    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join("trajectory.csv"), trajectory_csv(trajectories))?;
    let report = GrowReport {
        config,
        trajectories,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(out_dir.join("report.json"), json)?;

    let seed_n = seed.n();
    for t in trajectories {
        // With a single method DOT files land in the output directory; with
        // --method all each method gets a subdirectory.
        let dir = if method == MethodArg::All {
            let d = out_dir.join(t.method.to_string());
            std::fs::create_dir_all(&d)?;
            d
        } else {
            out_dir.to_path_buf()
        };
        std::fs::write(dir.join("step_0.dot"), dot(&t.seed_graph, seed_n, "step_0"))?;
        for step in &t.steps {
            let name = format!("step_{}", step.iteration);
            std::fs::write(dir.join(format!("{name}.dot")), dot(&step.graph, seed_n, &name))?;
        }
    }
    Ok(())
}
