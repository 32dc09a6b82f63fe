//! Graph Laplacians and the growth operators that transform them.
//!
//! All graphs are simple, undirected and unweighted, represented by their
//! dense combinatorial Laplacian L = D - A (degree diagonal, -1 off-diagonals,
//! zero row sums). Node indices are 1-based in every public signature; the
//! dense storage underneath is 0-based.
//!
//! The two whiskering operators grow a graph by attaching the same node
//! cluster to every existing node:
//!
//! * [`Laplacian::whisker_w1`] adds one leaf per node, mapping an n-node
//!   Laplacian to the 2n-node block matrix `[[L+I, -I], [-I, I]]`.
//! * [`Laplacian::whisker_w2`] adds a leaf plus a length-2 path per node,
//!   producing a 4n-node Laplacian with block order
//!   (original, leaves, first path nodes, second path nodes).
//!
//! [`Laplacian::attach_cluster`] is the general form: any `(s, B, C)` block
//! data whose assembled matrix `[[L+sI, B], [B^T, C]]` is again a Laplacian.

use ndarray::{s, Array2};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("node index {index} out of bounds for n = {n}")]
    IndexOutOfBounds { index: usize, n: usize },
    #[error("assembled matrix is not a graph Laplacian: {0}")]
    NotALaplacian(String),
    #[error("edge list parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("index set contains duplicate index {0}")]
    DuplicateIndex(usize),
    #[error("index set entries must be >= 1 (got {0})")]
    ZeroIndex(usize),
}

/// Entry-level tolerance when validating assembled matrices. Construction is
/// exact integer arithmetic in f64, so anything beyond roundoff is a bug.
const ENTRY_TOL: f64 = 1e-9;
const ROW_SUM_TOL: f64 = 1e-12;

/// Dense symmetric combinatorial Laplacian of a simple undirected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    n: usize,
    matrix: Array2<f64>,
}

/// Serializable edge-list view of a graph: `{"n": .., "edges": [[u, v], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphExport {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Laplacian {
    /// Build the Laplacian of the simple graph on `n` nodes with the given
    /// undirected edges (1-based endpoints). Rejects self-loops, duplicate
    /// edges (in either orientation) and out-of-range endpoints.
    pub fn from_edge_list(edges: &[(usize, usize)], n: usize) -> Result<Self, GraphError> {
        let mut matrix = Array2::<f64>::zeros((n, n));
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for node in [u, v] {
                if node < 1 || node > n {
                    return Err(GraphError::IndexOutOfBounds { index: node, n });
                }
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
            let (i, j) = (u - 1, v - 1);
            matrix[[i, j]] = -1.0;
            matrix[[j, i]] = -1.0;
            matrix[[i, i]] += 1.0;
            matrix[[j, j]] += 1.0;
        }
        Ok(Self { n, matrix })
    }

    /// Parse the edge-list text format: one `u v` pair per line (1-based),
    /// `#` starts a comment, blank lines are ignored. The node count is the
    /// largest index mentioned.
    pub fn from_edge_list_text(text: &str) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        let mut n = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize, GraphError> {
                tok.ok_or(GraphError::Parse {
                    line: idx + 1,
                    reason: "expected two node indices".into(),
                })?
                .parse::<usize>()
                .map_err(|e| GraphError::Parse {
                    line: idx + 1,
                    reason: format!("bad node index: {e}"),
                })
            };
            let u = parse(parts.next())?;
            let v = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(GraphError::Parse {
                    line: idx + 1,
                    reason: "trailing tokens after edge".into(),
                });
            }
            n = n.max(u).max(v);
            edges.push((u, v));
        }
        Self::from_edge_list(&edges, n)
    }

    /// Wrap a raw matrix after validating every Laplacian invariant.
    pub fn from_matrix(matrix: Array2<f64>) -> Result<Self, GraphError> {
        validate_laplacian(&matrix)?;
        let n = matrix.nrows();
        Ok(Self { n, matrix })
    }

    /// Internal constructor for operators whose output is a Laplacian by
    /// construction (block assembly from a validated input).
    fn from_matrix_unchecked(matrix: Array2<f64>) -> Self {
        debug_assert!(validate_laplacian(&matrix).is_ok());
        let n = matrix.nrows();
        Self { n, matrix }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    /// Degree of a node (1-based).
    pub fn degree(&self, node: usize) -> f64 {
        self.matrix[[node - 1, node - 1]]
    }

    /// Recover the edge list (1-based, u < v, lexicographic).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.matrix[[i, j]] < -0.5 {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn export(&self) -> GraphExport {
        GraphExport {
            n: self.n,
            edges: self.edges(),
        }
    }

    /// Exact connectivity check by breadth-first search on the edge pattern.
    /// Independent of any spectral computation.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut visited = vec![false; self.n];
        let mut stack = vec![0usize];
        visited[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for (j, seen) in visited.iter_mut().enumerate() {
                if j != i && self.matrix[[i, j]] < -0.5 && !*seen {
                    *seen = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == self.n
    }

    /// Whisker every node: new leaves are appended after the original nodes,
    /// leaf k attaching to node k. Output is `[[L+I, -I], [-I, I]]`.
    pub fn whisker_w1(&self) -> Laplacian {
        let n = self.n;
        let mut m = Array2::<f64>::zeros((2 * n, 2 * n));
        m.slice_mut(s![..n, ..n]).assign(&self.matrix);
        for i in 0..n {
            m[[i, i]] += 1.0;
            m[[n + i, n + i]] = 1.0;
            m[[i, n + i]] = -1.0;
            m[[n + i, i]] = -1.0;
        }
        Laplacian::from_matrix_unchecked(m)
    }

    /// Attach a leaf and a length-2 path to every node. Block order of the
    /// 4n-node output: original nodes, leaves, first path nodes, second path
    /// nodes, so node k gains edges to k+n and k+2n, and k+2n to k+3n.
    pub fn whisker_w2(&self) -> Laplacian {
        let n = self.n;
        let mut m = Array2::<f64>::zeros((4 * n, 4 * n));
        m.slice_mut(s![..n, ..n]).assign(&self.matrix);
        for i in 0..n {
            m[[i, i]] += 2.0;
            m[[n + i, n + i]] = 1.0;
            m[[2 * n + i, 2 * n + i]] = 2.0;
            m[[3 * n + i, 3 * n + i]] = 1.0;
            for leaf in [n + i, 2 * n + i] {
                m[[i, leaf]] = -1.0;
                m[[leaf, i]] = -1.0;
            }
            m[[2 * n + i, 3 * n + i]] = -1.0;
            m[[3 * n + i, 2 * n + i]] = -1.0;
        }
        Laplacian::from_matrix_unchecked(m)
    }

    /// Attach a single new leaf to node `i` (1-based). The new node gets
    /// index n+1.
    pub fn attach_leaf_at(&self, i: usize) -> Result<Laplacian, GraphError> {
        self.check_node(i)?;
        let n = self.n;
        let mut m = Array2::<f64>::zeros((n + 1, n + 1));
        m.slice_mut(s![..n, ..n]).assign(&self.matrix);
        m[[i - 1, i - 1]] += 1.0;
        m[[n, n]] = 1.0;
        m[[i - 1, n]] = -1.0;
        m[[n, i - 1]] = -1.0;
        Ok(Laplacian::from_matrix_unchecked(m))
    }

    /// Attach the 3-node cluster (leaf plus length-2 path) to node `i`.
    /// New node indices: n+1 (leaf), n+2 (first path node, adjacent to `i`),
    /// n+3 (second path node, adjacent to n+2).
    pub fn attach_path_cluster_at(&self, i: usize) -> Result<Laplacian, GraphError> {
        self.check_node(i)?;
        let n = self.n;
        let mut m = Array2::<f64>::zeros((n + 3, n + 3));
        m.slice_mut(s![..n, ..n]).assign(&self.matrix);
        m[[i - 1, i - 1]] += 2.0;
        m[[n, n]] = 1.0;
        m[[n + 1, n + 1]] = 2.0;
        m[[n + 2, n + 2]] = 1.0;
        for new in [n, n + 1] {
            m[[i - 1, new]] = -1.0;
            m[[new, i - 1]] = -1.0;
        }
        m[[n + 1, n + 2]] = -1.0;
        m[[n + 2, n + 1]] = -1.0;
        Ok(Laplacian::from_matrix_unchecked(m))
    }

    /// Assemble `[[L + sI, B], [B^T, C]]` and validate the result.
    pub fn attach_cluster(&self, cluster: &ClusterSpec) -> Result<Laplacian, GraphError> {
        let n = self.n;
        let r = cluster.r();
        if cluster.b.nrows() != n {
            return Err(GraphError::NotALaplacian(format!(
                "coupling block has {} rows, graph has {} nodes",
                cluster.b.nrows(),
                n
            )));
        }
        let mut m = Array2::<f64>::zeros((n + r, n + r));
        m.slice_mut(s![..n, ..n]).assign(&self.matrix);
        for i in 0..n {
            m[[i, i]] += cluster.s as f64;
        }
        m.slice_mut(s![..n, n..]).assign(&cluster.b);
        m.slice_mut(s![n.., ..n]).assign(&cluster.b.t());
        m.slice_mut(s![n.., n..]).assign(&cluster.c);
        validate_laplacian(&m)?;
        Ok(Laplacian {
            n: n + r,
            matrix: m,
        })
    }

    fn check_node(&self, i: usize) -> Result<(), GraphError> {
        if i < 1 || i > self.n {
            return Err(GraphError::IndexOutOfBounds {
                index: i,
                n: self.n,
            });
        }
        Ok(())
    }
}

/// Structural Laplacian validation: symmetry, off-diagonals in {0, -1},
/// degree diagonal, rows summing to zero. A matrix with this structure is
/// D - A of a simple graph and hence positive semidefinite with a zero
/// eigenvalue, so no spectral check is needed here.
pub fn validate_laplacian(m: &Array2<f64>) -> Result<(), GraphError> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(GraphError::NotALaplacian(format!(
            "matrix is {}x{}, not square",
            n,
            m.ncols()
        )));
    }
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            let e = m[[i, j]];
            if !e.is_finite() {
                return Err(GraphError::NotALaplacian(format!(
                    "non-finite entry at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            row_sum += e;
            if (e - m[[j, i]]).abs() > ROW_SUM_TOL {
                return Err(GraphError::NotALaplacian(format!(
                    "asymmetric at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            if i != j && e.abs() > ENTRY_TOL && (e + 1.0).abs() > ENTRY_TOL {
                return Err(GraphError::NotALaplacian(format!(
                    "off-diagonal ({}, {}) = {} is neither 0 nor -1",
                    i + 1,
                    j + 1,
                    e
                )));
            }
        }
        if row_sum.abs() > ROW_SUM_TOL * (n as f64).max(1.0) {
            return Err(GraphError::NotALaplacian(format!(
                "row {} sums to {}",
                i + 1,
                row_sum
            )));
        }
    }
    Ok(())
}

/// The `(s, B, C)` block data of a node-cluster attachment: `s` edges are
/// added to each attachment node, `B` couples the original nodes to the `r`
/// new ones, `C` is the internal Laplacian block of the cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSpec {
    pub s: usize,
    pub b: Array2<f64>,
    pub c: Array2<f64>,
}

impl ClusterSpec {
    pub fn new(s: usize, b: Array2<f64>, c: Array2<f64>) -> Self {
        Self { s, b, c }
    }

    /// Cluster size.
    pub fn r(&self) -> usize {
        self.c.nrows()
    }

    /// The one-leaf-per-node cluster: `attach_cluster` with this spec
    /// reproduces `whisker_w1` exactly (s = 1, B = -I, C = I).
    pub fn leaf(n: usize) -> Self {
        let mut b = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            b[[i, i]] = -1.0;
        }
        Self {
            s: 1,
            b,
            c: Array2::eye(n),
        }
    }

    /// The leaf-plus-path cluster of `whisker_w2`: s = 2, B = [-I, -I, 0],
    /// C the lower-right 3n x 3n block of the 4-block operator.
    pub fn leaf_and_path(n: usize) -> Self {
        let mut b = Array2::<f64>::zeros((n, 3 * n));
        let mut c = Array2::<f64>::zeros((3 * n, 3 * n));
        for i in 0..n {
            b[[i, i]] = -1.0;
            b[[i, n + i]] = -1.0;
            c[[i, i]] = 1.0;
            c[[n + i, n + i]] = 2.0;
            c[[2 * n + i, 2 * n + i]] = 1.0;
            c[[n + i, 2 * n + i]] = -1.0;
            c[[2 * n + i, n + i]] = -1.0;
        }
        Self { s: 2, b, c }
    }
}

/// Ordered set of distinct 1-based node indices, the `K` of a principal
/// submatrix `A[K]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSet {
    indices: Vec<usize>,
}

impl NodeSet {
    /// Sorts the input; duplicates and zero indices are rejected.
    pub fn new(mut indices: Vec<usize>) -> Result<Self, GraphError> {
        indices.sort_unstable();
        for w in indices.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateIndex(w[0]));
            }
        }
        if let Some(&first) = indices.first() {
            if first == 0 {
                return Err(GraphError::ZeroIndex(0));
            }
        }
        Ok(Self { indices })
    }

    pub fn empty() -> Self {
        Self {
            indices: Vec::new(),
        }
    }

    /// The full index set `[n]` = {1, ..., n}.
    pub fn full(n: usize) -> Self {
        Self {
            indices: (1..=n).collect(),
        }
    }

    /// All of `[n]` except `ground`.
    pub fn all_but(n: usize, ground: usize) -> Self {
        Self {
            indices: (1..=n).filter(|&i| i != ground).collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut v: Vec<usize> = self.indices.clone();
        v.extend(other.indices.iter().copied());
        v.sort_unstable();
        v.dedup();
        NodeSet { indices: v }
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        NodeSet {
            indices: self
                .indices
                .iter()
                .copied()
                .filter(|i| other.contains(*i))
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &NodeSet) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }
}

/// Principal submatrix A[K]: keep the rows and columns whose 1-based indices
/// are in `k`, in ascending order. `A[[n]] == A`; the empty set gives a 0x0
/// matrix.
pub fn principal_submatrix(a: &Array2<f64>, k: &NodeSet) -> Result<Array2<f64>, GraphError> {
    let n = a.nrows();
    if let Some(&max) = k.indices().last() {
        if max > n {
            return Err(GraphError::IndexOutOfBounds { index: max, n });
        }
    }
    let m = k.len();
    let mut out = Array2::<f64>::zeros((m, m));
    for (ri, &i) in k.indices().iter().enumerate() {
        for (rj, &j) in k.indices().iter().enumerate() {
            out[[ri, rj]] = a[[i - 1, j - 1]];
        }
    }
    Ok(out)
}

/// Erdős–Rényi G(n, p) sample.
pub fn erdos_renyi<R: rand::Rng>(n: usize, edge_prob: f64, rng: &mut R) -> Laplacian {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in (u + 1)..=n {
            if rng.gen::<f64>() < edge_prob {
                edges.push((u, v));
            }
        }
    }
    Laplacian::from_edge_list(&edges, n).expect("generated edges are valid")
}

/// Rejection-sample G(n, p) until connected.
pub fn random_connected<R: rand::Rng>(n: usize, edge_prob: f64, rng: &mut R) -> Laplacian {
    loop {
        let g = erdos_renyi(n, edge_prob, rng);
        if g.is_connected() {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn single_edge_laplacian() {
        let l = Laplacian::from_edge_list(&[(1, 2)], 2).unwrap();
        assert_eq!(l.matrix(), &array![[1.0, -1.0], [-1.0, 1.0]]);
    }

    #[test]
    fn empty_graph_is_zero_matrix() {
        let l = Laplacian::from_edge_list(&[], 3).unwrap();
        assert_eq!(l.matrix(), &Array2::<f64>::zeros((3, 3)));
    }

    #[test]
    fn triangle_degrees() {
        let l = Laplacian::from_edge_list(&[(1, 2), (2, 3), (1, 3)], 3).unwrap();
        assert_eq!(
            l.matrix(),
            &array![[2.0, -1.0, -1.0], [-1.0, 2.0, -1.0], [-1.0, -1.0, 2.0]]
        );
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Laplacian::from_edge_list(&[(1, 1)], 2),
            Err(GraphError::SelfLoop(1))
        );
        assert_eq!(
            Laplacian::from_edge_list(&[(1, 2), (2, 1)], 2),
            Err(GraphError::DuplicateEdge(1, 2))
        );
        assert_eq!(
            Laplacian::from_edge_list(&[(1, 3)], 2),
            Err(GraphError::IndexOutOfBounds { index: 3, n: 2 })
        );
    }

    #[test]
    fn edge_list_text_roundtrip() {
        let text = "# a triangle with a tail\n1 2\n2 3\n\n1 3   # closing edge\n3 4\n";
        let l = Laplacian::from_edge_list_text(text).unwrap();
        assert_eq!(l.n(), 4);
        assert_eq!(l.edges(), vec![(1, 2), (1, 3), (2, 3), (3, 4)]);
    }

    #[test]
    fn edge_list_text_rejects_garbage() {
        assert!(matches!(
            Laplacian::from_edge_list_text("1 2\n3 x"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Laplacian::from_edge_list_text("1"),
            Err(GraphError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn whisker_w1_single_node() {
        let l = Laplacian::from_edge_list(&[], 1).unwrap();
        let w = l.whisker_w1();
        assert_eq!(w.matrix(), &array![[1.0, -1.0], [-1.0, 1.0]]);
    }

    #[test]
    fn whisker_w1_edge_blocks() {
        let l = Laplacian::from_edge_list(&[(1, 2)], 2).unwrap();
        let w = l.whisker_w1();
        let expected = array![
            [2.0, -1.0, -1.0, 0.0],
            [-1.0, 2.0, 0.0, -1.0],
            [-1.0, 0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0, 1.0]
        ];
        assert_eq!(w.matrix(), &expected);
    }

    #[test]
    fn whisker_w2_single_node_is_p4() {
        let l = Laplacian::from_edge_list(&[], 1).unwrap();
        let w = l.whisker_w2();
        let expected = array![
            [2.0, -1.0, -1.0, 0.0],
            [-1.0, 1.0, 0.0, 0.0],
            [-1.0, 0.0, 2.0, -1.0],
            [0.0, 0.0, -1.0, 1.0]
        ];
        assert_eq!(w.matrix(), &expected);
    }

    #[test]
    fn cluster_specs_reproduce_whiskers() {
        let l = Laplacian::from_edge_list(&[(1, 2), (2, 3), (1, 3), (3, 4)], 4).unwrap();
        let w1 = l.attach_cluster(&ClusterSpec::leaf(4)).unwrap();
        assert_eq!(w1.matrix(), l.whisker_w1().matrix());
        let w2 = l.attach_cluster(&ClusterSpec::leaf_and_path(4)).unwrap();
        assert_eq!(w2.matrix(), l.whisker_w2().matrix());
    }

    #[test]
    fn attach_cluster_rejects_bad_row_sum() {
        // B row sums to -3 while s = 2: assembled rows cannot vanish.
        let l = Laplacian::from_edge_list(&[(1, 2)], 2).unwrap();
        let mut spec = ClusterSpec::leaf_and_path(2);
        spec.b[[0, 4]] = -1.0;
        assert!(matches!(
            l.attach_cluster(&spec),
            Err(GraphError::NotALaplacian(_))
        ));
    }

    #[test]
    fn principal_submatrix_cases() {
        let a = array![[2.0, -1.0], [-1.0, 1.0]];
        let single = principal_submatrix(&a, &NodeSet::new(vec![1]).unwrap()).unwrap();
        assert_eq!(single, array![[2.0]]);
        let full = principal_submatrix(&a, &NodeSet::full(2)).unwrap();
        assert_eq!(full, a);
        let empty = principal_submatrix(&a, &NodeSet::empty()).unwrap();
        assert_eq!(empty.nrows(), 0);
        assert!(matches!(
            principal_submatrix(&a, &NodeSet::new(vec![3]).unwrap()),
            Err(GraphError::IndexOutOfBounds { index: 3, n: 2 })
        ));
    }

    #[test]
    fn node_set_rejects_duplicates() {
        assert_eq!(
            NodeSet::new(vec![2, 1, 2]),
            Err(GraphError::DuplicateIndex(2))
        );
        assert_eq!(NodeSet::new(vec![0, 1]), Err(GraphError::ZeroIndex(0)));
    }

    #[test]
    fn whiskered_leaf_ordering_matches_index_arithmetic() {
        // Leaf k of whisker_w1 sits at index n+k and attaches to node k.
        let l = Laplacian::from_edge_list(&[(1, 2), (2, 3)], 3).unwrap();
        let w = l.whisker_w1();
        for k in 0..3 {
            assert_eq!(w.matrix()[[k, 3 + k]], -1.0);
            assert_eq!(w.matrix()[[3 + k, 3 + k]], 1.0);
        }
    }

    #[test]
    fn from_matrix_rejects_non_finite() {
        let m = array![[f64::NAN, 0.0], [0.0, 0.0]];
        assert!(matches!(
            Laplacian::from_matrix(m),
            Err(GraphError::NotALaplacian(_))
        ));
    }

    #[test]
    fn export_json_shape() {
        let l = Laplacian::from_edge_list(&[(1, 2), (2, 3)], 3).unwrap();
        let json = serde_json::to_string(&l.export()).unwrap();
        assert_eq!(json, r#"{"n":3,"edges":[[1,2],[2,3]]}"#);
    }

    #[test]
    fn connectivity_bfs() {
        let path = Laplacian::from_edge_list(&[(1, 2), (2, 3)], 3).unwrap();
        assert!(path.is_connected());
        let split = Laplacian::from_edge_list(&[(1, 2)], 3).unwrap();
        assert!(!split.is_connected());
        assert!(Laplacian::from_edge_list(&[], 1).unwrap().is_connected());
    }
}
