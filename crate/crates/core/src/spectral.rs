//! Dense symmetric eigendecomposition and the spectral quantities built on it:
//! algebraic connectivity, grounded Laplacians, the controllability Gramian
//! and traces of matrix powers.
//!
//! The eigensolver is cyclic Jacobi with an off-diagonal convergence threshold
//! of `1e-12 * ||A||_F` and a hard cap of `100 * n^2` rotations. Jacobi is
//! slow for big matrices but here everything is desk-scale and the method is
//! deterministic, simple and accurate to machine precision, which the
//! downstream rank tests rely on.

use crate::graph::{principal_submatrix, GraphError, Laplacian, NodeSet};
use ndarray::{Array1, Array2};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("Jacobi sweep did not converge within {rotations} rotations (n = {n})")]
    ConvergenceFailure { n: usize, rotations: usize },
    #[error("grounded Laplacian is singular (graph disconnected?)")]
    SingularGroundedLaplacian,
    #[error("matrix is singular, cannot raise to negative power")]
    SingularForNegativePower,
    #[error("eigenvalue {0:.3e} is not positive, cannot raise to fractional power")]
    NegativeEigenvalueForFractionalPower(f64),
    #[error("operation needs at least {needed} nodes, graph has {n}")]
    GraphTooSmall { needed: usize, n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

const SYMMETRY_TOL: f64 = 1e-12;
/// Eigenvalues below this magnitude are treated as zero when inverting.
pub const SINGULARITY_TOL: f64 = 1e-10;

/// Full ascending eigendecomposition of a symmetric matrix. Column `i` of
/// `vectors` pairs with `values[i]`; the columns are orthonormal and each is
/// sign-normalized so its largest-magnitude entry is positive.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Array2<f64>,
}

impl EigenSystem {
    /// `V diag(values) V^T`, the reconstruction the invariants are stated on.
    pub fn reconstruct(&self) -> Array2<f64> {
        let mut scaled = self.vectors.clone();
        for (j, &v) in self.values.iter().enumerate() {
            scaled.column_mut(j).mapv_inplace(|x| x * v);
        }
        scaled.dot(&self.vectors.t())
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
pub fn eig_sym(a: &Array2<f64>) -> Result<EigenSystem, SpectralError> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "eig_sym needs a square matrix");
    if n == 0 {
        return Ok(EigenSystem {
            values: Vec::new(),
            vectors: Array2::zeros((0, 0)),
        });
    }
    let mut max_asym = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            max_asym = max_asym.max((a[[i, j]] - a[[j, i]]).abs());
        }
    }
    if max_asym > SYMMETRY_TOL {
        return Err(SpectralError::NotSymmetric(max_asym));
    }

    let mut d = a.to_owned();
    // Work on the exactly-symmetric part; the asymmetry is below tolerance.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (d[[i, j]] + d[[j, i]]);
            d[[i, j]] = avg;
            d[[j, i]] = avg;
        }
    }
    let mut v = Array2::<f64>::eye(n);

    let frob: f64 = d.iter().map(|x| x * x).sum::<f64>().sqrt();
    let off_tol = 1e-12 * frob;
    let rotation_cap = 100 * n * n;
    let mut rotations = 0usize;

    loop {
        let off: f64 = {
            let mut s = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    s += d[[i, j]] * d[[i, j]];
                }
            }
            (2.0 * s).sqrt()
        };
        if off <= off_tol {
            break;
        }
        if rotations >= rotation_cap {
            return Err(SpectralError::ConvergenceFailure { n, rotations });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = d[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                let app = d[[p, p]];
                let aqq = d[[q, q]];
                // Skip rotations that cannot change anything at f64 precision.
                if apq.abs() <= f64::EPSILON * (app.abs() + aqq.abs()) * 0.5 {
                    d[[p, q]] = 0.0;
                    d[[q, p]] = 0.0;
                    continue;
                }
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    if i != p && i != q {
                        let dip = d[[i, p]];
                        let diq = d[[i, q]];
                        d[[i, p]] = c * dip - s * diq;
                        d[[p, i]] = d[[i, p]];
                        d[[i, q]] = s * dip + c * diq;
                        d[[q, i]] = d[[i, q]];
                    }
                }
                d[[p, p]] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                d[[q, q]] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                d[[p, q]] = 0.0;
                d[[q, p]] = 0.0;
                for i in 0..n {
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = c * vip - s * viq;
                    v[[i, q]] = s * vip + c * viq;
                }
                rotations += 1;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[[i, i]].total_cmp(&d[[j, j]]));
    let values: Vec<f64> = order.iter().map(|&i| d[[i, i]]).collect();
    let mut vectors = Array2::<f64>::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        let mut best = 0usize;
        for i in 1..n {
            if v[[i, src]].abs() > v[[best, src]].abs() {
                best = i;
            }
        }
        let sign = if v[[best, src]] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors[[i, col]] = sign * v[[i, src]];
        }
    }
    Ok(EigenSystem { values, vectors })
}

/// Singular values (descending) and right singular vectors of a rectangular
/// matrix via one-sided Jacobi: columns are rotated until pairwise orthogonal,
/// so `A V = U diag(sigma)`. One-sided Jacobi keeps high relative accuracy in
/// the small singular values, which the rank thresholds need.
pub(crate) fn svd_one_sided(a: &Array2<f64>) -> Result<(Vec<f64>, Array2<f64>), SpectralError> {
    let cols = a.ncols();
    let mut b = a.to_owned();
    let mut v = Array2::<f64>::eye(cols);
    // Columns annihilated down to rotation roundoff are pure noise; without
    // this floor they stay correlated with the live columns and the sweep
    // never settles. Rotations preserve the Frobenius norm, so the floor is
    // fixed up front.
    let frob: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_floor_sq = (1e-15 * frob) * (1e-15 * frob);
    let max_sweeps = 60 + 2 * cols;
    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = b.column(p).dot(&b.column(p));
                let beta: f64 = b.column(q).dot(&b.column(q));
                let gamma: f64 = b.column(p).dot(&b.column(q));
                if alpha <= norm_floor_sq || beta <= norm_floor_sq {
                    continue;
                }
                if gamma.abs() <= 1e-14 * (alpha * beta).sqrt() {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..b.nrows() {
                    let bip = b[[i, p]];
                    let biq = b[[i, q]];
                    b[[i, p]] = c * bip - s * biq;
                    b[[i, q]] = s * bip + c * biq;
                }
                for i in 0..cols {
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = c * vip - s * viq;
                    v[[i, q]] = s * vip + c * viq;
                }
                rotated = true;
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SpectralError::ConvergenceFailure {
            n: cols,
            rotations: max_sweeps * cols * cols,
        });
    }
    let mut sigmas: Vec<(f64, usize)> = (0..cols)
        .map(|j| (b.column(j).dot(&b.column(j)).sqrt(), j))
        .collect();
    sigmas.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut vout = Array2::<f64>::zeros((cols, cols));
    for (col, &(_, src)) in sigmas.iter().enumerate() {
        for i in 0..cols {
            vout[[i, col]] = v[[i, src]];
        }
    }
    Ok((sigmas.into_iter().map(|(s, _)| s).collect(), vout))
}

/// Second-smallest Laplacian eigenvalue: positive exactly when the graph is
/// connected.
pub fn lambda2(l: &Laplacian) -> Result<f64, SpectralError> {
    if l.n() < 2 {
        return Err(SpectralError::GraphTooSmall {
            needed: 2,
            n: l.n(),
        });
    }
    Ok(eig_sym(l.matrix())?.values[1])
}

/// Algebraic connectivity together with its eigenvector.
pub fn fiedler(l: &Laplacian) -> Result<(f64, Array1<f64>), SpectralError> {
    if l.n() < 2 {
        return Err(SpectralError::GraphTooSmall {
            needed: 2,
            n: l.n(),
        });
    }
    let eig = eig_sym(l.matrix())?;
    Ok((eig.values[1], eig.vectors.column(1).to_owned()))
}

/// Delete the ground node's row and column: `L[K]` with `K = [n] \ {ground}`.
pub fn grounded_laplacian(l: &Laplacian, ground: usize) -> Result<Array2<f64>, SpectralError> {
    if ground < 1 || ground > l.n() {
        return Err(GraphError::IndexOutOfBounds {
            index: ground,
            n: l.n(),
        }
        .into());
    }
    Ok(principal_submatrix(
        l.matrix(),
        &NodeSet::all_but(l.n(), ground),
    )?)
}

/// Controllability Gramian of the grounded consensus dynamics,
/// `P = 1/2 * L[K]^{-1}`, with the max-norm residual of the Lyapunov
/// equation `P A + A P = I` it solves.
#[derive(Debug, Clone)]
pub struct GramianResult {
    pub p: Array2<f64>,
    pub trace: f64,
    pub residual: f64,
}

pub fn gramian(l: &Laplacian, ground: usize) -> Result<GramianResult, SpectralError> {
    let a = grounded_laplacian(l, ground)?;
    let inv = sym_inverse(&a).map_err(|e| match e {
        SpectralError::SingularForNegativePower => SpectralError::SingularGroundedLaplacian,
        other => other,
    })?;
    let p = inv.mapv(|x| 0.5 * x);
    let trace = (0..p.nrows()).map(|i| p[[i, i]]).sum();
    let m = p.dot(&a) + a.dot(&p);
    let mut residual = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            residual = residual.max((m[[i, j]] - target).abs());
        }
    }
    Ok(GramianResult { p, trace, residual })
}

/// Inverse of a symmetric positive-definite matrix via its eigensystem.
pub(crate) fn sym_inverse(a: &Array2<f64>) -> Result<Array2<f64>, SpectralError> {
    let eig = eig_sym(a)?;
    if a.nrows() > 0 && eig.min_value() <= SINGULARITY_TOL {
        return Err(SpectralError::SingularForNegativePower);
    }
    let mut scaled = eig.vectors.clone();
    for (j, &v) in eig.values.iter().enumerate() {
        scaled.column_mut(j).mapv_inplace(|x| x / v);
    }
    Ok(scaled.dot(&eig.vectors.t()))
}

/// `Tr A^p = sum_i lambda_i(A)^p`. The trace of a 0x0 matrix is 0 for every
/// power; negative or fractional powers require positive definiteness.
pub fn trace_power(a: &Array2<f64>, p: f64) -> Result<f64, SpectralError> {
    if a.nrows() == 0 {
        return Ok(0.0);
    }
    let eig = eig_sym(a)?;
    let rounded = p.round();
    let is_integer = (p - rounded).abs() < 1e-9;
    if p < 0.0 && eig.min_value() <= SINGULARITY_TOL {
        return Err(SpectralError::SingularForNegativePower);
    }
    if !is_integer && eig.min_value() <= SINGULARITY_TOL {
        return Err(SpectralError::NegativeEigenvalueForFractionalPower(
            eig.min_value(),
        ));
    }
    let sum = if is_integer {
        let ip = rounded as i32;
        eig.values.iter().map(|&v| v.powi(ip)).sum()
    } else {
        eig.values.iter().map(|&v| v.powf(p)).sum()
    };
    Ok(sum)
}

/// Group an ascending eigenvalue list into numerically-equal clusters:
/// consecutive values within `1e-7 * max(1, |lambda_max|)` belong to one
/// eigenspace. Returns index ranges into the input.
pub fn group_eigenvalues(values: &[f64]) -> Vec<std::ops::Range<usize>> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let tol = 1e-7 * values[n - 1].abs().max(1.0);
    let mut groups = Vec::new();
    let mut start = 0usize;
    for i in 1..n {
        if values[i] - values[i - 1] > tol {
            groups.push(start..i);
            start = i;
        }
    }
    groups.push(start..n);
    groups
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Laplacian;
    use ndarray::array;

    fn max_abs(a: &Array2<f64>) -> f64 {
        a.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = eig_sym(&Array2::eye(3)).unwrap();
        for &v in &eig.values {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_by_two_closed_form() {
        let eig = eig_sym(&array![[1.0, -1.0], [-1.0, 1.0]]).unwrap();
        assert!(eig.values[0].abs() < 1e-12);
        assert!((eig.values[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_spectrum() {
        let l = Laplacian::from_edge_list(&[(1, 2), (2, 3), (1, 3)], 3).unwrap();
        let eig = eig_sym(l.matrix()).unwrap();
        let expected = [0.0, 3.0, 3.0];
        for (v, e) in eig.values.iter().zip(expected) {
            assert!((v - e).abs() < 1e-10, "got {v}, expected {e}");
        }
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        let l = Laplacian::from_edge_list(&[(1, 2), (2, 3), (3, 4), (1, 4), (1, 3)], 4).unwrap();
        let eig = eig_sym(l.matrix()).unwrap();
        let recon_err = max_abs(&(&eig.reconstruct() - l.matrix()));
        assert!(recon_err < 1e-9 * max_abs(l.matrix()).max(1.0));
        let gram = eig.vectors.t().dot(&eig.vectors);
        let orth_err = max_abs(&(&gram - &Array2::<f64>::eye(4)));
        assert!(orth_err < 1e-9);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let a = array![[1.0, 2.0], [0.5, 1.0]];
        assert!(matches!(eig_sym(&a), Err(SpectralError::NotSymmetric(_))));
    }

    #[test]
    fn lambda2_examples() {
        let p3 = Laplacian::from_edge_list(&[(1, 2), (2, 3)], 3).unwrap();
        assert!((lambda2(&p3).unwrap() - 1.0).abs() < 1e-10);
        let k3 = Laplacian::from_edge_list(&[(1, 2), (2, 3), (1, 3)], 3).unwrap();
        assert!((lambda2(&k3).unwrap() - 3.0).abs() < 1e-10);
        let disconnected = Laplacian::from_edge_list(&[], 2).unwrap();
        assert!(lambda2(&disconnected).unwrap().abs() < 1e-12);
    }

    #[test]
    fn grounded_laplacian_examples() {
        let p2 = Laplacian::from_edge_list(&[(1, 2)], 2).unwrap();
        assert_eq!(grounded_laplacian(&p2, 1).unwrap(), array![[1.0]]);
        let p3 = Laplacian::from_edge_list(&[(1, 2), (2, 3)], 3).unwrap();
        assert_eq!(
            grounded_laplacian(&p3, 1).unwrap(),
            array![[2.0, -1.0], [-1.0, 1.0]]
        );
        let k3 = Laplacian::from_edge_list(&[(1, 2), (2, 3), (1, 3)], 3).unwrap();
        assert_eq!(
            grounded_laplacian(&k3, 2).unwrap(),
            array![[2.0, -1.0], [-1.0, 2.0]]
        );
        assert!(grounded_laplacian(&p2, 3).is_err());
    }

    #[test]
    fn gramian_examples() {
        let p2 = Laplacian::from_edge_list(&[(1, 2)], 2).unwrap();
        let g = gramian(&p2, 1).unwrap();
        assert!((g.p[[0, 0]] - 0.5).abs() < 1e-12);
        assert!((g.trace - 0.5).abs() < 1e-12);

        // P3 grounded at 1: inverse of [[2,-1],[-1,1]] is [[1,1],[1,2]].
        let p3 = Laplacian::from_edge_list(&[(1, 2), (2, 3)], 3).unwrap();
        let g = gramian(&p3, 1).unwrap();
        let expected = array![[0.5, 0.5], [0.5, 1.0]];
        assert!(max_abs(&(&g.p - &expected)) < 1e-10);
        assert!((g.trace - 1.5).abs() < 1e-10);
        assert!(g.residual < 1e-8);

        let disconnected = Laplacian::from_edge_list(&[(1, 2)], 3).unwrap();
        assert!(matches!(
            gramian(&disconnected, 1),
            Err(SpectralError::SingularGroundedLaplacian)
        ));
    }

    #[test]
    fn trace_power_examples() {
        let a = array![[2.0, -1.0], [-1.0, 1.0]];
        assert!((trace_power(&a, -1.0).unwrap() - 3.0).abs() < 1e-10);
        assert!((trace_power(&Array2::eye(5), 0.37).unwrap() - 5.0).abs() < 1e-10);
        let empty = Array2::<f64>::zeros((0, 0));
        assert_eq!(trace_power(&empty, -1.0).unwrap(), 0.0);

        let singular = array![[1.0, -1.0], [-1.0, 1.0]];
        assert!(matches!(
            trace_power(&singular, -1.0),
            Err(SpectralError::SingularForNegativePower)
        ));
        assert!(matches!(
            trace_power(&singular, 0.5),
            Err(SpectralError::NegativeEigenvalueForFractionalPower(_))
        ));
        // Integer powers are fine on singular PSD matrices.
        assert!((trace_power(&singular, 2.0).unwrap() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn trace_power_matches_direct_trace() {
        let l = Laplacian::from_edge_list(&[(1, 2), (2, 3), (3, 4), (1, 4)], 4).unwrap();
        let direct: f64 = (0..4).map(|i| l.matrix()[[i, i]]).sum();
        assert!((trace_power(l.matrix(), 1.0).unwrap() - direct).abs() < 1e-10);
    }

    #[test]
    fn eigenvalue_grouping() {
        let groups = group_eigenvalues(&[0.0, 1.0, 1.0 + 1e-9, 3.0]);
        assert_eq!(groups, vec![0..1, 1..3, 3..4]);
        let single = group_eigenvalues(&[2.0]);
        assert_eq!(single, vec![0..1]);
    }

    #[test]
    fn svd_rank_detection() {
        // Rank-1 matrix: second singular value vanishes.
        let a = array![[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]];
        let (sig, v) = svd_one_sided(&a).unwrap();
        assert!(sig[0] > 1.0);
        assert!(sig[1] < 1e-12 * sig[0]);
        // Null vector: A v1 = 0.
        let null = a.dot(&v.column(1).to_owned());
        assert!(null.iter().all(|x| x.abs() < 1e-10));
    }
}
