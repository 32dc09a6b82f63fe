//! Attachment-node optimization and the growth loop.
//!
//! Three ways to pick where the next cluster goes, all maximizing the
//! algebraic connectivity of the grown graph:
//!
//! * exhaustive search over the n integer attachments (the per-step optimum);
//! * a convex relaxation with fractional candidate-edge weights on the
//!   simplex, solved by projected supergradient ascent and rounded to the
//!   heaviest candidate;
//! * the perturbation heuristic scoring candidates by squared Fiedler-vector
//!   disagreement with the new nodes.
//!
//! `lambda2(L(x))` is concave in the weights x (it is an infimum of linear
//! functions on the complement of the all-ones kernel), so supergradient
//! ascent with diminishing steps reaches the relaxation optimum; the integer
//! vertices are evaluated alongside the iterates so the reported value also
//! dominates the integer optimum regardless of where ascent stops.

use crate::bounds::{bound_single_cluster, bound_single_leaf, BoundsError};
use crate::graph::{GraphExport, GraphError, Laplacian};
use crate::spectral::{eig_sym, fiedler, group_eigenvalues, lambda2, SpectralError};
use ndarray::{s, Array1, Array2};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizeError {
    #[error("graph must be connected")]
    NotConnected,
    #[error("iterations must be >= 1")]
    ZeroIterations,
    #[error("invalid candidate weights: {0}")]
    InvalidWeights(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// Comparisons within this tolerance count as ties and break to the smaller
/// node index, so argmax selections are stable under roundoff.
const TIE_TOL: f64 = 1e-9;

/// Node-selection strategy for a growth step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exhaustive,
    Relaxation,
    Heuristic,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Exhaustive => "exhaustive",
            Method::Relaxation => "relaxation",
            Method::Heuristic => "heuristic",
        })
    }
}

/// What gets attached at each step: a single leaf, or the 3-node
/// leaf-plus-length-2-path cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterKind {
    Leaf,
    Path2,
}

impl std::fmt::Display for ClusterKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClusterKind::Leaf => "leaf",
            ClusterKind::Path2 => "path2",
        })
    }
}

/// Fractional candidate weights on the simplex `{0 <= x <= 1, sum x = 1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateWeights {
    x: Vec<f64>,
}

impl CandidateWeights {
    pub fn new(x: Vec<f64>) -> Result<Self, OptimizeError> {
        let sum: f64 = x.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(OptimizeError::InvalidWeights(format!(
                "weights sum to {sum}"
            )));
        }
        if let Some(bad) = x.iter().find(|&&v| !(-1e-9..=1.0 + 1e-9).contains(&v)) {
            return Err(OptimizeError::InvalidWeights(format!(
                "weight {bad} outside [0, 1]"
            )));
        }
        Ok(Self { x })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            x: vec![1.0 / n as f64; n],
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.x
    }

    /// Heaviest candidate as a 1-based node index, smallest index on ties.
    pub fn argmax_node(&self) -> usize {
        argmax_tiebreak_smallest(&self.x) + 1
    }
}

fn argmax_tiebreak_smallest(values: &[f64]) -> usize {
    let mut best = 0usize;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] + TIE_TOL {
            best = i;
        }
    }
    best
}

/// Euclidean projection onto the simplex `{x >= 0, sum x = 1}` by the
/// sort-and-threshold construction. The upper bound x <= 1 is implied by the
/// other two constraints.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cumulative += uk;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// The relaxed attachment problem: maximize `lambda2(L(x))` over the simplex,
/// where `L(x)` is the seed Laplacian padded with the new cluster nodes, any
/// fixed internal cluster edges, and the weighted candidate edges
/// `sum_l x_l a_l a_l^T`.
pub struct RelaxationProblem {
    base: Array2<f64>,
    candidates: Vec<Vec<Array1<f64>>>,
}

impl RelaxationProblem {
    /// One new node, candidate edges to every existing node.
    pub fn leaf(l: &Laplacian) -> Self {
        let n = l.n();
        let dim = n + 1;
        let mut base = Array2::<f64>::zeros((dim, dim));
        base.slice_mut(s![..n, ..n]).assign(l.matrix());
        let candidates = (0..n)
            .map(|i| {
                let mut a = Array1::<f64>::zeros(dim);
                a[i] = 1.0;
                a[n] = -1.0;
                vec![a]
            })
            .collect();
        Self { base, candidates }
    }

    /// Three new nodes (leaf, two path nodes); the path edge is fixed, and
    /// candidate l carries the two edges from node l to the leaf and the
    /// first path node.
    pub fn cluster(l: &Laplacian) -> Self {
        let n = l.n();
        let dim = n + 3;
        let mut base = Array2::<f64>::zeros((dim, dim));
        base.slice_mut(s![..n, ..n]).assign(l.matrix());
        // Fixed internal edge between the two path nodes.
        let mut a34 = Array1::<f64>::zeros(dim);
        a34[n + 1] = 1.0;
        a34[n + 2] = -1.0;
        for i in 0..dim {
            for j in 0..dim {
                base[[i, j]] += a34[i] * a34[j];
            }
        }
        let candidates = (0..n)
            .map(|i| {
                let mut a1 = Array1::<f64>::zeros(dim);
                a1[i] = 1.0;
                a1[n] = -1.0;
                let mut a2 = Array1::<f64>::zeros(dim);
                a2[i] = 1.0;
                a2[n + 1] = -1.0;
                vec![a1, a2]
            })
            .collect();
        Self { base, candidates }
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn dim(&self) -> usize {
        self.base.nrows()
    }

    /// Assemble `L(x)`.
    pub fn laplacian_of(&self, x: &[f64]) -> Array2<f64> {
        assert_eq!(x.len(), self.candidates.len());
        let mut m = self.base.clone();
        for (xl, vecs) in x.iter().zip(&self.candidates) {
            for a in vecs {
                for i in 0..self.dim() {
                    if a[i] == 0.0 {
                        continue;
                    }
                    for j in 0..self.dim() {
                        m[[i, j]] += xl * a[i] * a[j];
                    }
                }
            }
        }
        m
    }

    /// `lambda2(L(x))` and a supergradient. On a simple second eigenvalue the
    /// supergradient is `g_l = sum_a (v^T a)^2` for the Fiedler vector v; when
    /// the second eigenvalue is numerically repeated, the average of that
    /// formula over an orthonormal eigenspace basis is used. The average is a
    /// convex combination of valid supergradients (hence valid itself) and,
    /// unlike any single basis vector, is independent of the arbitrary basis
    /// the eigensolver returns.
    pub fn evaluate(&self, x: &[f64]) -> Result<(f64, Vec<f64>), OptimizeError> {
        let eig = eig_sym(&self.laplacian_of(x))?;
        let value = eig.values[1];
        let groups = group_eigenvalues(&eig.values);
        let group = groups
            .into_iter()
            .find(|g| g.contains(&1))
            .expect("index 1 is always grouped");
        // Never include the kernel direction (index 0) in the basis.
        let basis: Vec<usize> = group.filter(|&i| i >= 1).collect();
        let mut grad = vec![0.0; self.candidates.len()];
        for &col in &basis {
            let v = eig.vectors.column(col);
            for (gl, vecs) in grad.iter_mut().zip(&self.candidates) {
                for a in vecs {
                    let dot = v.dot(a);
                    *gl += dot * dot;
                }
            }
        }
        let k = basis.len() as f64;
        for gl in &mut grad {
            *gl /= k;
        }
        Ok((value, grad))
    }
}

/// Result of solving a relaxed attachment problem.
#[derive(Debug, Clone)]
pub struct Relaxation {
    pub weights: CandidateWeights,
    pub relaxed_value: f64,
    pub rounded_node: usize,
    /// False when the ascent hit the iteration cap before the objective
    /// stalled; the best iterate is still returned.
    pub converged: bool,
    pub iterations: usize,
}

const ASCENT_CAP: usize = 5000;
const ASCENT_STALL_WINDOW: usize = 100;
const ASCENT_IMPROVEMENT_TOL: f64 = 1e-9;

fn solve_relaxation(problem: &RelaxationProblem) -> Result<Relaxation, OptimizeError> {
    let n = problem.num_candidates();
    // Best feasible point seen: the ascent iterates plus the n integer
    // vertices, so the reported value upper-bounds the integer optimum even
    // if ascent stalls short of the relaxation optimum.
    let mut best_x = vec![1.0 / n as f64; n];
    let (mut best_value, _) = problem.evaluate(&best_x)?;
    for l in 0..n {
        let mut vertex = vec![0.0; n];
        vertex[l] = 1.0;
        let (value, _) = problem.evaluate(&vertex)?;
        if value > best_value + TIE_TOL {
            best_value = value;
            best_x = vertex;
        }
    }

    let mut x = vec![1.0 / n as f64; n];
    let mut stalled_for = 0usize;
    let mut converged = false;
    let mut iterations = 0usize;
    for k in 1..=ASCENT_CAP {
        iterations = k;
        let (value, grad) = problem.evaluate(&x)?;
        if value > best_value + ASCENT_IMPROVEMENT_TOL {
            stalled_for = 0;
        } else {
            stalled_for += 1;
        }
        if value > best_value {
            best_value = value;
            best_x = x.clone();
        }
        if stalled_for >= ASCENT_STALL_WINDOW {
            converged = true;
            break;
        }
        let step = 1.0 / (k as f64).sqrt();
        let moved: Vec<f64> = x
            .iter()
            .zip(&grad)
            .map(|(xi, gi)| xi + step * gi)
            .collect();
        x = project_to_simplex(&moved);
    }

    let weights = CandidateWeights::new(best_x)?;
    let rounded_node = weights.argmax_node();
    Ok(Relaxation {
        weights,
        relaxed_value: best_value,
        rounded_node,
        converged,
        iterations,
    })
}

fn require_connected(l: &Laplacian) -> Result<(), OptimizeError> {
    if !l.is_connected() {
        return Err(OptimizeError::NotConnected);
    }
    Ok(())
}

/// Best single-leaf attachment by trying all n candidates; ties break to the
/// smallest node index. Returns the node and the achieved connectivity.
pub fn exhaustive_leaf(l: &Laplacian) -> Result<(usize, f64), OptimizeError> {
    require_connected(l)?;
    let mut best = (1usize, lambda2(&l.attach_leaf_at(1)?)?);
    for i in 2..=l.n() {
        let value = lambda2(&l.attach_leaf_at(i)?)?;
        if value > best.1 + TIE_TOL {
            best = (i, value);
        }
    }
    Ok(best)
}

/// Best single leaf-and-path cluster attachment over all n candidates.
pub fn exhaustive_cluster(l: &Laplacian) -> Result<(usize, f64), OptimizeError> {
    require_connected(l)?;
    let mut best = (1usize, lambda2(&l.attach_path_cluster_at(1)?)?);
    for i in 2..=l.n() {
        let value = lambda2(&l.attach_path_cluster_at(i)?)?;
        if value > best.1 + TIE_TOL {
            best = (i, value);
        }
    }
    Ok(best)
}

/// Solve the relaxed single-leaf problem.
pub fn relax_leaf(l: &Laplacian) -> Result<Relaxation, OptimizeError> {
    require_connected(l)?;
    solve_relaxation(&RelaxationProblem::leaf(l))
}

/// Solve the relaxed cluster problem.
pub fn relax_cluster(l: &Laplacian) -> Result<Relaxation, OptimizeError> {
    require_connected(l)?;
    solve_relaxation(&RelaxationProblem::cluster(l))
}

/// Node of maximum degree, smallest index on ties: the provisional
/// attachment the heuristic uses to realize a Fiedler vector that includes
/// the new cluster nodes.
fn provisional_node(l: &Laplacian) -> usize {
    let mut best = 1usize;
    for i in 2..=l.n() {
        if l.degree(i) > l.degree(best) + TIE_TOL {
            best = i;
        }
    }
    best
}

fn heuristic_choice(l: &Laplacian, kind: ClusterKind) -> Result<usize, OptimizeError> {
    require_connected(l)?;
    let n = l.n();
    let provisional = provisional_node(l);
    let grown = match kind {
        ClusterKind::Leaf => l.attach_leaf_at(provisional)?,
        ClusterKind::Path2 => l.attach_path_cluster_at(provisional)?,
    };
    let (_, v) = fiedler(&grown)?;
    // Attachment entries of the new cluster: the leaf alone, or the leaf and
    // the first path node. Scores are squared differences, so the Fiedler
    // vector's sign is irrelevant.
    let attach_entries: &[usize] = match kind {
        ClusterKind::Leaf => &[n],
        ClusterKind::Path2 => &[n, n + 1],
    };
    let scores: Vec<f64> = (0..n)
        .map(|i| {
            attach_entries
                .iter()
                .map(|&j| (v[i] - v[j]) * (v[i] - v[j]))
                .sum()
        })
        .collect();
    Ok(argmax_tiebreak_smallest(&scores) + 1)
}

/// Perturbation heuristic for a single leaf: score node i by
/// `(v_i - v_{n+1})^2` where v is the Fiedler vector of the provisionally
/// grown graph.
pub fn heuristic_leaf(l: &Laplacian) -> Result<usize, OptimizeError> {
    heuristic_choice(l, ClusterKind::Leaf)
}

/// Perturbation heuristic for the 3-node cluster: score node i by the sum of
/// squared disagreements with both attachment nodes.
pub fn heuristic_cluster(l: &Laplacian) -> Result<usize, OptimizeError> {
    heuristic_choice(l, ClusterKind::Path2)
}

/// One growth step's record.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthStep {
    pub iteration: usize,
    pub chosen_node: usize,
    pub lambda2: f64,
    /// Relaxed objective value; present only for the relaxation method.
    pub relaxed_value: Option<f64>,
    /// `Tr(L'[K]^{-1}) = 2 Tr P` of the grown graph.
    pub two_trace_p: f64,
    /// The theorem lower bound on `two_trace_p`.
    pub bound: f64,
    pub slack: f64,
    pub graph: GraphExport,
}

/// Full record of a growth experiment: one method, one cluster kind,
/// `iterations` attachments.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthTrajectory {
    pub method: Method,
    pub cluster: ClusterKind,
    pub seed_graph: GraphExport,
    pub steps: Vec<GrowthStep>,
    /// False when some relaxation step hit its iteration cap.
    pub relaxation_converged: bool,
}

/// Iterate attachment: pick a node by `method`, attach `cluster`, record the
/// connectivity, Gramian trace and bound, and repeat. Everything here is
/// deterministic; `rng_seed` is carried so configurations that later add
/// randomized methods stay reproducible, and is echoed in reports.
pub fn grow(
    l0: &Laplacian,
    method: Method,
    cluster: ClusterKind,
    iterations: usize,
    _rng_seed: u64,
    ground: usize,
) -> Result<GrowthTrajectory, OptimizeError> {
    if iterations == 0 {
        return Err(OptimizeError::ZeroIterations);
    }
    require_connected(l0)?;
    let mut current = l0.clone();
    let mut steps = Vec::with_capacity(iterations);
    let mut relaxation_converged = true;
    for k in 1..=iterations {
        let (node, relaxed_value) = match (method, cluster) {
            (Method::Exhaustive, ClusterKind::Leaf) => {
                let (node, _) = exhaustive_leaf(&current)?;
                (node, None)
            }
            (Method::Exhaustive, ClusterKind::Path2) => {
                let (node, _) = exhaustive_cluster(&current)?;
                (node, None)
            }
            (Method::Relaxation, ClusterKind::Leaf) => {
                let r = relax_leaf(&current)?;
                relaxation_converged &= r.converged;
                (r.rounded_node, Some(r.relaxed_value))
            }
            (Method::Relaxation, ClusterKind::Path2) => {
                let r = relax_cluster(&current)?;
                relaxation_converged &= r.converged;
                (r.rounded_node, Some(r.relaxed_value))
            }
            (Method::Heuristic, ClusterKind::Leaf) => (heuristic_leaf(&current)?, None),
            (Method::Heuristic, ClusterKind::Path2) => (heuristic_cluster(&current)?, None),
        };
        let report = match cluster {
            ClusterKind::Leaf => bound_single_leaf(&current, node, ground)?,
            ClusterKind::Path2 => bound_single_cluster(&current, node, ground)?,
        };
        let next = match cluster {
            ClusterKind::Leaf => current.attach_leaf_at(node)?,
            ClusterKind::Path2 => current.attach_path_cluster_at(node)?,
        };
        let lambda = lambda2(&next)?;
        steps.push(GrowthStep {
            iteration: k,
            chosen_node: node,
            lambda2: lambda,
            relaxed_value,
            two_trace_p: report.two_trace_p,
            bound: report.bound,
            slack: report.slack,
            graph: next.export(),
        });
        current = next;
    }
    Ok(GrowthTrajectory {
        method,
        cluster,
        seed_graph: l0.export(),
        steps,
        relaxation_converged,
    })
}
