//! The `analyze` subcommand: spectrum, PBH verdicts of the pair and all its
//! whiskered variants, Gramian trace, the whole-graph bound reports, and a
//! handful of deterministic supermodularity spot checks, as one JSON
//! document.

use crate::{EXIT_PARSE};
use netgrow::bounds::{
    bound_w1, bound_w2, check_trace_power_supermodularity, BoundReport,
    SUPERMODULARITY_EXPONENTS,
};
use netgrow::control::{pbh_controllable, InputMatrix, PbhReport};
use netgrow::graph::{GraphExport, NodeSet};
use netgrow::spectral::{eig_sym, gramian, grounded_laplacian, lambda2};
use netgrow::Laplacian;
use serde::Serialize;
use std::path::Path;

#[derive(Serialize)]
struct Verdict {
    controllable: bool,
    witness_eigenvalue: Option<f64>,
    witness: Option<Vec<f64>>,
}

impl From<PbhReport> for Verdict {
    fn from(r: PbhReport) -> Self {
        let (witness_eigenvalue, witness) = match r.witness {
            Some(w) => (Some(w.eigenvalue), Some(w.vector)),
            None => (None, None),
        };
        Verdict {
            controllable: r.controllable,
            witness_eigenvalue,
            witness,
        }
    }
}

#[derive(Serialize)]
struct VariantVerdict {
    pattern: Vec<bool>,
    verdict: Verdict,
}

#[derive(Serialize)]
struct GramianSection {
    ground: usize,
    trace: f64,
    two_trace: f64,
    residual: f64,
}

#[derive(Serialize)]
struct BoundsSection {
    w1: BoundReport,
    w2: BoundReport,
}

#[derive(Serialize)]
struct SpotCheck {
    p: f64,
    j: Vec<usize>,
    k: Vec<usize>,
    lhs: f64,
    rhs: f64,
    holds: bool,
}

#[derive(Serialize)]
struct AnalyzeReport {
    graph: GraphExport,
    input: Vec<f64>,
    tol: f64,
    ground: usize,
    connected: bool,
    spectrum: Vec<f64>,
    lambda2: Option<f64>,
    pbh_base: Verdict,
    pbh_w1: Vec<VariantVerdict>,
    pbh_w2: Vec<VariantVerdict>,
    gramian: Option<GramianSection>,
    bounds: Option<BoundsSection>,
    supermodularity_spot_checks: Vec<SpotCheck>,
}

/// Parse an input-vector spec: `e<i>` or a comma-separated value list.
pub fn parse_input_spec(spec: &str, n: usize) -> Result<InputMatrix, String> {
    let trimmed = spec.trim();
    if let Some(rest) = trimmed.strip_prefix('e') {
        if let Ok(i) = rest.parse::<usize>() {
            return InputMatrix::basis(n, i).map_err(|e| e.to_string());
        }
    }
    let values: Result<Vec<f64>, _> = trimmed
        .split(',')
        .map(|tok| tok.trim().parse::<f64>())
        .collect();
    let values = values.map_err(|e| format!("bad input vector: {e}"))?;
    if values.len() != n {
        return Err(format!(
            "input vector has {} entries, graph has {n} nodes",
            values.len()
        ));
    }
    InputMatrix::column(&values).map_err(|e| e.to_string())
}

fn spot_checks(l: &Laplacian, ground: usize) -> Vec<SpotCheck> {
    let Ok(a) = grounded_laplacian(l, ground) else {
        return Vec::new();
    };
    let m = a.nrows();
    if m < 2 || !l.is_connected() {
        return Vec::new();
    }
    // Two deterministic index splits: first/second half, odds/evens.
    let half = m / 2;
    let splits = [
        (
            NodeSet::new((1..=half).collect()).unwrap(),
            NodeSet::new((half + 1..=m).collect()).unwrap(),
        ),
        (
            NodeSet::new((1..=m).step_by(2).collect()).unwrap(),
            NodeSet::new((2..=m).step_by(2).collect()).unwrap(),
        ),
    ];
    let mut out = Vec::new();
    for (j, k) in &splits {
        for &p in &SUPERMODULARITY_EXPONENTS {
            if let Ok(check) = check_trace_power_supermodularity(&a, j, k, p) {
                out.push(SpotCheck {
                    p,
                    j: j.indices().to_vec(),
                    k: k.indices().to_vec(),
                    lhs: check.lhs,
                    rhs: check.rhs,
                    holds: check.holds,
                });
            }
        }
    }
    out
}

pub fn run(graph_path: &Path, input_spec: &str, tol: f64, ground: usize, out: Option<&Path>) -> i32 {
    let l = match crate::load_graph(graph_path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let b = match parse_input_spec(input_spec, l.n()) {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_PARSE;
        }
    };
    if ground < 1 || ground > l.n() {
        eprintln!("error: ground node {ground} out of range");
        return EXIT_PARSE;
    }

    let spectrum = match eig_sym(l.matrix()) {
        Ok(eig) => eig.values,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let connected = l.is_connected();

    let pbh_base: Verdict = match pbh_controllable(&l, &b, tol) {
        Ok(r) => r.into(),
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let w1_graph = l.whisker_w1();
    let mut pbh_w1 = Vec::new();
    for leaf in [true, false] {
        let stacked = b.stack_w1(leaf);
        match pbh_controllable(&w1_graph, &stacked, tol) {
            Ok(r) => pbh_w1.push(VariantVerdict {
                pattern: vec![leaf],
                verdict: r.into(),
            }),
            Err(e) => {
                eprintln!("error: {e}");
                return 1;
            }
        }
    }
    let w2_graph = l.whisker_w2();
    let mut pbh_w2 = Vec::new();
    for bits in 0..8u8 {
        let pattern = [bits & 1 != 0, bits & 2 != 0, bits & 4 != 0];
        let stacked = b.stack_w2(pattern);
        match pbh_controllable(&w2_graph, &stacked, tol) {
            Ok(r) => pbh_w2.push(VariantVerdict {
                pattern: pattern.to_vec(),
                verdict: r.into(),
            }),
            Err(e) => {
                eprintln!("error: {e}");
                return 1;
            }
        }
    }

    let gramian_section = if connected && l.n() >= 2 {
        match gramian(&l, ground) {
            Ok(g) => Some(GramianSection {
                ground,
                trace: g.trace,
                two_trace: 2.0 * g.trace,
                residual: g.residual,
            }),
            Err(_) => None,
        }
    } else {
        None
    };
    let bounds_section = if connected && l.n() >= 2 {
        match (bound_w1(&l, ground), bound_w2(&l, ground)) {
            (Ok(w1), Ok(w2)) => Some(BoundsSection { w1, w2 }),
            _ => None,
        }
    } else {
        None
    };

    let report = AnalyzeReport {
        graph: l.export(),
        input: b.entries().column(0).to_vec(),
        tol,
        ground,
        connected,
        lambda2: if l.n() >= 2 { lambda2(&l).ok() } else { None },
        spectrum,
        pbh_base,
        pbh_w1,
        pbh_w2,
        gramian: gramian_section,
        bounds: bounds_section,
        supermodularity_spot_checks: spot_checks(&l, ground),
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{json}");
    if let Some(path) = out {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("error: writing {}: {e}", path.display());
            return 1;
        }
    }
    0
}
