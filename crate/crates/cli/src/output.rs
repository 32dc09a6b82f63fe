//! Text artifact formatting: round-trippable CSV, DOT exports.

use netgrow::graph::GraphExport;
use netgrow::optimize::GrowthTrajectory;

/// 17 significant decimal digits: enough for exact f64 round-trips, so CSV
/// diffs are byte-stable across runs and platforms.
pub fn g17(x: f64) -> String {
    format!("{:.16e}", x)
}

pub const CSV_HEADER: &str =
    "iteration,method,cluster,chosen_node,lambda2,relaxed_value,two_trace_P,bound,slack";

pub fn trajectory_csv(trajectories: &[GrowthTrajectory]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for t in trajectories {
        for s in &t.steps {
            let relaxed = s.relaxed_value.map(g17).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                s.iteration,
                t.method,
                t.cluster,
                s.chosen_node,
                g17(s.lambda2),
                relaxed,
                g17(s.two_trace_p),
                g17(s.bound),
                g17(s.slack)
            ));
        }
    }
    out
}

/// Graphviz DOT rendering; nodes beyond the seed size carry `grown=1` so the
/// seed and its growth render distinctly.
pub fn dot(graph: &GraphExport, seed_n: usize, name: &str) -> String {
    let mut s = format!("graph {name} {{\n");
    for v in 1..=graph.n {
        if v > seed_n {
            s.push_str(&format!("  {v} [grown=1];\n"));
        } else {
            s.push_str(&format!("  {v};\n"));
        }
    }
    for (u, v) in &graph.edges {
        s.push_str(&format!("  {u} -- {v};\n"));
    }
    s.push_str("}\n");
    s
}
