//! Controllability of Laplacian consensus dynamics.
//!
//! The workhorse is the PBH test in eigenspace form: the pair (L, B) is
//! uncontrollable exactly when some eigenspace of L, with orthonormal basis
//! W, has rank(W^T B) below its dimension. That formulation handles the
//! repeated eigenvalues whiskered graphs routinely produce, and reduces to
//! the textbook left-eigenvector test on simple spectra. A brute-force
//! Kalman rank computation is kept alongside as an independent oracle for
//! small n.
//!
//! The eigenvalue maps describe how whiskering transforms the spectrum: each
//! eigenvalue lambda of L induces the roots of a fixed low-degree relation
//! among the eigenvalues of the whiskered graph.

use crate::graph::{ClusterSpec, GraphError, Laplacian};
use crate::spectral::{eig_sym, group_eigenvalues, svd_one_sided, SpectralError};
use ndarray::{s, Array1, Array2};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControlError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("n = {n} exceeds the Kalman oracle limit of {max}")]
    TooLargeForOracle { n: usize, max: usize },
    #[error("eigenvalue {0} is negative, not a Laplacian eigenvalue")]
    NegativeEigenvalue(f64),
    #[error("root finding failed: {0}")]
    RootFindingFailure(String),
    #[error("shift matrix (Lambda I - C) is singular; theorem hypotheses not met")]
    SingularShift,
    #[error("invalid input matrix: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Default tolerance for orthogonality and rank thresholds. Rank tests are
/// fragile at machine precision, so the tolerance is explicit everywhere.
pub const DEFAULT_TOL: f64 = 1e-7;

/// Conditioning of the controllability matrix degrades quickly with n; the
/// oracle refuses to guess beyond this.
pub const KALMAN_MAX_N: usize = 12;

/// Dense n x m input (actuation) matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct InputMatrix {
    entries: Array2<f64>,
}

impl InputMatrix {
    pub fn new(entries: Array2<f64>) -> Result<Self, ControlError> {
        if entries.ncols() == 0 {
            return Err(ControlError::InvalidInput(
                "input matrix needs at least one column".into(),
            ));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(ControlError::InvalidInput(
                "input matrix has non-finite entries".into(),
            ));
        }
        Ok(Self { entries })
    }

    /// Standard basis vector e_i (1-based) as a single-column input.
    pub fn basis(n: usize, i: usize) -> Result<Self, ControlError> {
        if i < 1 || i > n {
            return Err(GraphError::IndexOutOfBounds { index: i, n }.into());
        }
        let mut b = Array2::<f64>::zeros((n, 1));
        b[[i - 1, 0]] = 1.0;
        Ok(Self { entries: b })
    }

    /// Single-column input from a value list.
    pub fn column(values: &[f64]) -> Result<Self, ControlError> {
        let b = Array2::from_shape_vec((values.len(), 1), values.to_vec())
            .expect("shape matches by construction");
        Self::new(b)
    }

    /// Full actuation B = I.
    pub fn identity(n: usize) -> Self {
        Self {
            entries: Array2::eye(n),
        }
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn m(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    /// Input for the leaf-whiskered graph. The original block always keeps
    /// its input; when the leaf block carries input too it does so on its own
    /// channels, giving the block-diagonal `[[b, 0], [0, b]]`. The
    /// preservation theorems require orthogonality blockwise (`w1^T b = 0`
    /// and `w2^T b = 0` separately), which is the PBH condition for separate
    /// columns; a single shared column `[b; b]` is annihilated by the
    /// ever-present eigenvector `[1; -1]` at eigenvalue 2 and would make
    /// every whiskered pair uncontrollable.
    pub fn stack_w1(&self, leaf_carries_input: bool) -> InputMatrix {
        let (n, m) = (self.n(), self.m());
        let cols = if leaf_carries_input { 2 * m } else { m };
        let mut out = Array2::<f64>::zeros((2 * n, cols));
        out.slice_mut(s![..n, ..m]).assign(&self.entries);
        if leaf_carries_input {
            out.slice_mut(s![n.., m..]).assign(&self.entries);
        }
        InputMatrix { entries: out }
    }

    /// Input for the leaf-and-path whiskered graph: the original block keeps
    /// its input and every selected new block gets its own copy of `b` on
    /// separate channels (same blockwise convention as [`Self::stack_w1`]).
    pub fn stack_w2(&self, pattern: [bool; 3]) -> InputMatrix {
        let (n, m) = (self.n(), self.m());
        let extra = pattern.iter().filter(|&&p| p).count();
        let mut out = Array2::<f64>::zeros((4 * n, m * (1 + extra)));
        out.slice_mut(s![..n, ..m]).assign(&self.entries);
        let mut col = m;
        for (block, &carries) in pattern.iter().enumerate() {
            if carries {
                let start = (block + 1) * n;
                out.slice_mut(s![start..start + n, col..col + m])
                    .assign(&self.entries);
                col += m;
            }
        }
        InputMatrix { entries: out }
    }
}

/// Eigenvector certifying uncontrollability: `L w = lambda w` and `w^T B = 0`
/// within tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct PbhWitness {
    pub eigenvalue: f64,
    pub vector: Vec<f64>,
}

/// Controllability verdict; carries a witness exactly when uncontrollable.
#[derive(Debug, Clone, Serialize)]
pub struct PbhReport {
    pub controllable: bool,
    pub witness: Option<PbhWitness>,
}

/// PBH test in eigenspace form. For each eigenspace of L with orthonormal
/// basis W (n x k), the pair is uncontrollable iff rank(W^T B) < k, with
/// rank counted from singular values above `tol * sigma_max`. The witness is
/// the eigenspace combination annihilating B, taken from the first deficient
/// eigenspace in ascending eigenvalue order.
pub fn pbh_controllable(
    l: &Laplacian,
    b: &InputMatrix,
    tol: f64,
) -> Result<PbhReport, ControlError> {
    if b.n() != l.n() {
        return Err(ControlError::DimensionMismatch {
            expected: l.n(),
            got: b.n(),
        });
    }
    // Rank thresholds are scaled by the largest singular value of B itself:
    // an eigenspace block W^T B that is entirely roundoff must count as rank
    // zero, and its own largest singular value is no scale at all.
    let (b_sigmas, _) = svd_one_sided(b.entries())?;
    let scale = b_sigmas[0];
    let eig = eig_sym(l.matrix())?;
    for group in group_eigenvalues(&eig.values) {
        let k = group.len();
        let w = eig.vectors.slice(s![.., group.clone()]);
        // m x k: columns live in eigenspace-combination space, so the right
        // singular vectors are the combinations we need.
        let mt = b.entries().t().dot(&w);
        let (sigmas, combos) = svd_one_sided(&mt.to_owned())?;
        let rank = sigmas.iter().filter(|&&sv| sv > tol * scale).count();
        if rank < k {
            let c = combos.column(combos.ncols() - 1);
            let mut witness = Array1::<f64>::zeros(l.n());
            for (j, &cj) in c.iter().enumerate() {
                witness.scaled_add(cj, &w.column(j));
            }
            let norm = witness.dot(&witness).sqrt();
            witness.mapv_inplace(|x| x / norm);
            let lw = l.matrix().dot(&witness);
            let eigenvalue = witness.dot(&lw);
            return Ok(PbhReport {
                controllable: false,
                witness: Some(PbhWitness {
                    eigenvalue,
                    vector: witness.to_vec(),
                }),
            });
        }
    }
    Ok(PbhReport {
        controllable: true,
        witness: None,
    })
}

/// Numerical rank of the controllability matrix `[B, LB, ..., L^{n-1}B]`,
/// thresholding singular values at `1e-8 * sigma_max`. The pair is
/// controllable iff the rank equals n. Only trustworthy at small n.
///
/// The columns are normalized before the SVD: rank is invariant under
/// nonzero column scaling, and the raw Krylov columns span several decades
/// (`||L^{n-1} b||` grows like `lambda_max^{n-1}`), which otherwise pushes
/// genuinely controllable pairs below the threshold.
pub fn kalman_rank(l: &Laplacian, b: &InputMatrix) -> Result<usize, ControlError> {
    let n = l.n();
    if n > KALMAN_MAX_N {
        return Err(ControlError::TooLargeForOracle {
            n,
            max: KALMAN_MAX_N,
        });
    }
    if b.n() != n {
        return Err(ControlError::DimensionMismatch {
            expected: n,
            got: b.n(),
        });
    }
    let m = b.m();
    let mut ctrb = Array2::<f64>::zeros((n, n * m));
    let mut block = b.entries().clone();
    for power in 0..n {
        ctrb.slice_mut(s![.., power * m..(power + 1) * m])
            .assign(&block);
        if power + 1 < n {
            block = l.matrix().dot(&block);
        }
    }
    for j in 0..ctrb.ncols() {
        let norm = ctrb.column(j).dot(&ctrb.column(j)).sqrt();
        if norm > 0.0 {
            ctrb.column_mut(j).mapv_inplace(|x| x / norm);
        }
    }
    let (sigmas, _) = svd_one_sided(&ctrb)?;
    let sigma_max = sigmas[0];
    Ok(sigmas.iter().filter(|&&sv| sv > 1e-8 * sigma_max).count())
}

/// Both roots of `Lambda^2 - (lambda + 2) Lambda + lambda = 0`, descending.
/// These are the two eigenvalues of the leaf-whiskered graph induced by the
/// eigenvalue `lambda` of the original graph.
pub fn w1_eigenvalue_map(lambda: f64) -> Result<(f64, f64), ControlError> {
    let lambda = clamp_eigenvalue(lambda)?;
    let disc = (lambda * lambda + 4.0).sqrt();
    let plus = 0.5 * (lambda + 2.0 + disc);
    // Product of the roots is lambda; dividing avoids cancellation.
    let minus = lambda / plus;
    Ok((plus, minus))
}

/// The quartic eigenvalue relation of the leaf-and-path operator:
/// `((2-L)(1-L) - 1) * ((lambda+2-L)(1-L) - 1) - (1-L)^2 = 0` in `L`.
/// Its four roots are the eigenvalues the whiskered graph inherits from
/// `lambda`; they are the eigenvalues of an unreduced symmetric tridiagonal
/// 4x4 pencil, hence always real and distinct.
fn w2_relation(lambda: f64, big: f64) -> f64 {
    let u = 1.0 - big;
    ((2.0 - big) * u - 1.0) * ((lambda + 2.0 - big) * u - 1.0) - u * u
}

/// All four roots of the leaf-and-path eigenvalue relation, ascending, found
/// by sign-change scanning and bisection over `[0, lambda + 6]`.
pub fn w2_eigenvalue_map(lambda: f64) -> Result<[f64; 4], ControlError> {
    let lambda = clamp_eigenvalue(lambda)?;
    let lo = -1e-6;
    let hi = lambda + 6.0;
    let steps = 20_000usize;
    let dx = (hi - lo) / steps as f64;
    let mut roots: Vec<f64> = Vec::with_capacity(4);
    let mut prev_x = lo;
    let mut prev_q = w2_relation(lambda, prev_x);
    for i in 1..=steps {
        let x = lo + dx * i as f64;
        let q = w2_relation(lambda, x);
        if prev_q == 0.0 {
            roots.push(prev_x.max(0.0));
        } else if q != 0.0 && prev_q.signum() != q.signum() {
            let root = bisect(|t| w2_relation(lambda, t), prev_x, x);
            roots.push(root.max(0.0));
        }
        prev_x = x;
        prev_q = q;
    }
    if prev_q == 0.0 {
        roots.push(prev_x);
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    if roots.len() != 4 {
        return Err(ControlError::RootFindingFailure(format!(
            "expected 4 roots for lambda = {lambda}, found {}",
            roots.len()
        )));
    }
    Ok([roots[0], roots[1], roots[2], roots[3]])
}

fn clamp_eigenvalue(lambda: f64) -> Result<f64, ControlError> {
    if lambda < -1e-9 {
        return Err(ControlError::NegativeEigenvalue(lambda));
    }
    Ok(lambda.max(0.0))
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if flo.signum() == fmid.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Which whiskering operator a preservation check exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhiskerOp {
    W1,
    W2,
}

/// Test harness for the preservation theorems: the PBH verdict of (L, b)
/// must equal the verdict of the whiskered pair with the stacked input
/// selected by `variant` (one bool per new block: true means that block
/// carries b, false means zero). Returns whether the two verdicts agree.
pub fn verify_growth_preserves_controllability(
    l: &Laplacian,
    b: &InputMatrix,
    op: WhiskerOp,
    variant: &[bool],
    tol: f64,
) -> Result<bool, ControlError> {
    let expected_len = match op {
        WhiskerOp::W1 => 1,
        WhiskerOp::W2 => 3,
    };
    if variant.len() != expected_len {
        return Err(ControlError::DimensionMismatch {
            expected: expected_len,
            got: variant.len(),
        });
    }
    let base = pbh_controllable(l, b, tol)?;
    let (grown, stacked) = match op {
        WhiskerOp::W1 => (l.whisker_w1(), b.stack_w1(variant[0])),
        WhiskerOp::W2 => (
            l.whisker_w2(),
            b.stack_w2([variant[0], variant[1], variant[2]]),
        ),
    };
    let grown_report = pbh_controllable(&grown, &stacked, tol)?;
    Ok(base.controllable == grown_report.controllable)
}

/// Outcome of the general cluster-attachment obstruction check. The
/// underlying theorem gives sufficient conditions only, so `admissible =
/// false` means "not certified" (inconclusive), not "controllable".
#[derive(Debug, Clone)]
pub struct ObstructionCheck {
    pub admissible: bool,
    /// Eigenvalue of `B (Lambda I - C)^{-1} B^T` at `w`, present whenever `w`
    /// is an eigenvector of that matrix within tolerance.
    pub f_value: Option<f64>,
    /// Assembled uncontrollability witness `[w; (Lambda I - C)^{-1} B^T w]`
    /// for the grown pair, present when admissible.
    pub witness: Option<Vec<f64>>,
}

/// Check whether the pair grown by `cluster` is certified uncontrollable at
/// the candidate eigenvalue `big_lambda`: requires (lambda, w) to be an
/// eigenpair of L orthogonal to b, `w` to be an eigenvector of
/// `B (Lambda I - C)^{-1} B^T`, and the shift relation
/// `Lambda - lambda - s = f(Lambda)` to hold.
pub fn cluster_obstruction_check(
    l: &Laplacian,
    b: &InputMatrix,
    cluster: &ClusterSpec,
    big_lambda: f64,
    w: &[f64],
    tol: f64,
) -> Result<ObstructionCheck, ControlError> {
    let n = l.n();
    if w.len() != n {
        return Err(ControlError::DimensionMismatch {
            expected: n,
            got: w.len(),
        });
    }
    if cluster.b.nrows() != n {
        return Err(ControlError::DimensionMismatch {
            expected: n,
            got: cluster.b.nrows(),
        });
    }
    let mut w = Array1::from(w.to_vec());
    let norm = w.dot(&w).sqrt();
    if norm == 0.0 {
        return Err(ControlError::InvalidInput("witness vector is zero".into()));
    }
    w.mapv_inplace(|x| x / norm);

    // Hypotheses on (lambda, w): eigenpair of L, orthogonal to b.
    let lw = l.matrix().dot(&w);
    let lambda = w.dot(&lw);
    let eig_residual = lw
        .iter()
        .zip(w.iter())
        .fold(0.0f64, |m, (&a, &b)| m.max((a - lambda * b).abs()));
    let orth_residual = b
        .entries()
        .t()
        .dot(&w)
        .iter()
        .fold(0.0f64, |m, &x| m.max(x.abs()));
    if eig_residual > tol || orth_residual > tol {
        return Ok(ObstructionCheck {
            admissible: false,
            f_value: None,
            witness: None,
        });
    }

    // (Lambda I - C) must be safely invertible.
    let c_eig = eig_sym(&cluster.c)?;
    if c_eig
        .values
        .iter()
        .any(|&mu| (big_lambda - mu).abs() <= 1e-10)
    {
        return Err(ControlError::SingularShift);
    }
    let r = cluster.r();
    let mut scaled = c_eig.vectors.clone();
    for (j, &mu) in c_eig.values.iter().enumerate() {
        scaled.column_mut(j).mapv_inplace(|x| x / (big_lambda - mu));
    }
    let shift_inv = scaled.dot(&c_eig.vectors.t());
    let g = cluster.b.dot(&shift_inv).dot(&cluster.b.t());

    let gw = g.dot(&w);
    let f_value = w.dot(&gw);
    let eig_of_g = gw
        .iter()
        .zip(w.iter())
        .fold(0.0f64, |m, (&a, &b)| m.max((a - f_value * b).abs()))
        <= tol;
    let relation = (big_lambda - lambda - cluster.s as f64 - f_value).abs() <= tol;
    let admissible = eig_of_g && relation;

    let witness = if admissible {
        let beta = shift_inv.dot(&cluster.b.t().dot(&w));
        let mut full = Vec::with_capacity(n + r);
        full.extend(w.iter());
        full.extend(beta.iter());
        Some(full)
    } else {
        None
    };
    Ok(ObstructionCheck {
        admissible,
        f_value: if eig_of_g { Some(f_value) } else { None },
        witness,
    })
}
