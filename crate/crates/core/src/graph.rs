//! Undirected simple graphs, structured families and their Laplacians.
//!
//! Vertex layouts of the generated families are part of the contract:
//!
//! * [`crown`]: vertices `0` and `1` are the ring-side pendants, `2` is the
//!   negotiator of the clique, `3..=k+1` are the remaining clique members.
//! * [`semi_crown`]: clique on `1..=k`, pendant `0` hangs off vertex `1`,
//!   pendant `k+1` hangs off vertex `k`.
//! * [`ring_of_cliques`]: vertex `ℓ·k + j` is member `j` of clique `ℓ`, and
//!   member `0` is the negotiator. With this ordering
//!   `L(G_RC) = I_n ⊗ L(G_C) + L(G_R) ⊗ e₁e₁ᵀ` holds literally.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dense::DenseSymMatrix;
use crate::spectrum;
use crate::{Error, Result};

/// Undirected simple graph on vertices `0..num_vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    /// Sorted, each pair stored as `(lo, hi)`.
    edges: Vec<(usize, usize)>,
    /// Sorted neighbour lists.
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Validates and normalizes an edge list. Self-loops, out-of-range
    /// endpoints and duplicate edges (in either orientation) are rejected.
    pub fn new(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for &(i, j) in edges {
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {i}")));
            }
            if i >= num_vertices || j >= num_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i}, {j}) out of range for {num_vertices} vertices"
                )));
            }
            if !set.insert((i.min(j), i.max(j))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({i}, {j})")));
            }
        }
        Ok(Self::from_sorted_set(num_vertices, set))
    }

    /// Graph with no edges.
    pub fn empty(num_vertices: usize) -> Result<Self> {
        Self::new(num_vertices, &[])
    }

    fn from_sorted_set(num_vertices: usize, set: BTreeSet<(usize, usize)>) -> Self {
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); num_vertices];
        for &(i, j) in &edges {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self { num_vertices, edges, adjacency }
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(lo, hi)` pairs in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.num_vertices && self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Degrees sorted ascending.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        d.sort_unstable();
        d
    }

    /// `L[i][i] = deg(i)`, `L[i][j] = -1` for every edge, zero elsewhere.
    pub fn laplacian(&self) -> DenseSymMatrix {
        let mut l = DenseSymMatrix::zeros(self.num_vertices);
        for (v, nbrs) in self.adjacency.iter().enumerate() {
            l.set(v, v, nbrs.len() as f64);
        }
        for &(i, j) in &self.edges {
            l.set(i, j, -1.0);
        }
        l
    }

    /// Ascending Laplacian eigenvalues from the dense eigensolver.
    pub fn laplacian_spectrum(&self) -> Result<Vec<f64>> {
        self.laplacian().eigenvalues()
    }

    /// Same vertices, every pair that is not an edge of `self`.
    pub fn complement(&self) -> Self {
        let mut set = BTreeSet::new();
        for i in 0..self.num_vertices {
            for j in i + 1..self.num_vertices {
                if !self.has_edge(i, j) {
                    set.insert((i, j));
                }
            }
        }
        Self::from_sorted_set(self.num_vertices, set)
    }

    /// Component label per vertex (labels are the smallest vertex of each
    /// component) and the component count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.num_vertices];
        let mut count = 0;
        let mut stack = Vec::new();
        for root in 0..self.num_vertices {
            if label[root] != usize::MAX {
                continue;
            }
            count += 1;
            label[root] = root;
            stack.push(root);
            while let Some(v) = stack.pop() {
                for &u in &self.adjacency[v] {
                    if label[u] == usize::MAX {
                        label[u] = root;
                        stack.push(u);
                    }
                }
            }
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 == 1
    }

    /// Whether `vertices` are mutually reachable using only edges between
    /// members of the set. An empty or singleton set is connected.
    pub fn is_connected_within(&self, vertices: &[usize]) -> bool {
        let Some(&root) = vertices.first() else {
            return true;
        };
        let mut member = vec![false; self.num_vertices];
        for &v in vertices {
            member[v] = true;
        }
        let mut seen = vec![false; self.num_vertices];
        seen[root] = true;
        let mut stack = vec![root];
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adjacency[v] {
                if member[u] && !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    stack.push(u);
                }
            }
        }
        reached == vertices.len()
    }

    /// Subgraph induced by `vertices`, relabelled `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self> {
        let mut index = vec![usize::MAX; self.num_vertices];
        for (new, &old) in vertices.iter().enumerate() {
            if old >= self.num_vertices {
                return Err(Error::InvalidGraph(format!("vertex {old} out of range")));
            }
            index[old] = new;
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|(i, j)| index[*i] != usize::MAX && index[*j] != usize::MAX)
            .map(|&(i, j)| (index[i], index[j]))
            .collect();
        Self::new(vertices.len(), &edges)
    }
}

/// Size parameters of the hierarchical ring-of-cliques topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingCliqueParams {
    /// Number of cliques on the ring, at least 3.
    pub n: usize,
    /// Clique size, at least 2.
    pub k: usize,
}

impl RingCliqueParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("ring of cliques needs n >= 3, got {n}")));
        }
        if k < 2 {
            return Err(Error::InvalidParameter(format!("ring of cliques needs k >= 2, got {k}")));
        }
        Ok(Self { n, k })
    }

    pub fn num_vertices(&self) -> usize {
        self.n * self.k
    }

    /// Vertex index of the negotiator of clique `l`.
    pub fn negotiator(&self, l: usize) -> usize {
        l * self.k
    }
}

fn clique_edges(vertices: impl Iterator<Item = usize> + Clone, out: &mut Vec<(usize, usize)>) {
    let vs: Vec<usize> = vertices.collect();
    for (a, &i) in vs.iter().enumerate() {
        for &j in &vs[a + 1..] {
            out.push((i, j));
        }
    }
}

/// Complete graph on `k` vertices.
pub fn clique(k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InvalidParameter("clique size must be at least 1".into()));
    }
    let mut edges = Vec::new();
    clique_edges(0..k, &mut edges);
    Graph::new(k, &edges)
}

/// Cycle `0–1–…–(n−1)–0`.
pub fn ring(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("ring needs n >= 3, got {n}")));
    }
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges)
}

/// A `k`-clique plus two pendants attached to its negotiator.
pub fn crown(k: usize) -> Result<Graph> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("crown needs k >= 2, got {k}")));
    }
    let mut edges = vec![(0, 2), (1, 2)];
    clique_edges(2..k + 2, &mut edges);
    Graph::new(k + 2, &edges)
}

/// A `k`-clique with one pendant on its first and one on its last member.
pub fn semi_crown(k: usize) -> Result<Graph> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("semi-crown needs k >= 3, got {k}")));
    }
    let mut edges = vec![(0, 1), (k, k + 1)];
    clique_edges(1..k + 1, &mut edges);
    Graph::new(k + 2, &edges)
}

/// `n` cliques of size `k` whose negotiators form a ring.
pub fn ring_of_cliques(params: RingCliqueParams) -> Result<Graph> {
    let RingCliqueParams { n, k } = RingCliqueParams::new(params.n, params.k)?;
    let mut edges = Vec::with_capacity(n * k * (k - 1) / 2 + n);
    for l in 0..n {
        clique_edges(l * k..(l + 1) * k, &mut edges);
    }
    for l in 0..n {
        edges.push((l * k, ((l + 1) % n) * k));
    }
    Graph::new(n * k, &edges)
}

/// Laplacian spectrum of a graph on `num_vertices` vertices from the spectrum
/// of its complement: one zero is kept and every other eigenvalue `μ` maps
/// to `N − μ`.
pub fn complement_eigen_transfer(
    complement_spectrum: &[f64],
    num_vertices: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    if complement_spectrum.len() != num_vertices {
        return Err(Error::InconsistentSpectrum(format!(
            "expected {num_vertices} eigenvalues, got {}",
            complement_spectrum.len()
        )));
    }
    let zero_at = complement_spectrum
        .iter()
        .enumerate()
        .min_by(|a, b| libm::fabs(*a.1).total_cmp(&libm::fabs(*b.1)))
        .map(|(i, _)| i)
        .filter(|&i| libm::fabs(complement_spectrum[i]) <= tol)
        .ok_or_else(|| Error::InconsistentSpectrum("complement spectrum has no zero eigenvalue".into()))?;
    let n = num_vertices as f64;
    let out: Vec<f64> = complement_spectrum
        .iter()
        .enumerate()
        .map(|(i, &mu)| if i == zero_at { 0.0 } else { n - mu })
        .collect();
    Ok(spectrum::sorted(&out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_edges() {
        assert!(Graph::new(3, &[(0, 0)]).is_err());
        assert!(Graph::new(3, &[(0, 3)]).is_err());
        assert!(Graph::new(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(0, &[]).is_err());
    }

    #[test]
    fn family_parameter_errors() {
        assert!(matches!(clique(0), Err(Error::InvalidParameter(_))));
        assert!(matches!(ring(2), Err(Error::InvalidParameter(_))));
        assert!(matches!(crown(1), Err(Error::InvalidParameter(_))));
        assert!(matches!(semi_crown(2), Err(Error::InvalidParameter(_))));
        assert!(ring_of_cliques(RingCliqueParams { n: 2, k: 4 }).is_err());
        assert!(ring_of_cliques(RingCliqueParams { n: 3, k: 1 }).is_err());
    }

    #[test]
    fn clique_edge_counts() {
        assert_eq!(clique(1).unwrap().num_edges(), 0);
        let k4 = clique(4).unwrap();
        assert_eq!(k4.num_edges(), 6);
        let l = k4.laplacian();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(l.get(i, j), if i == j { 3.0 } else { -1.0 });
            }
        }
    }

    #[test]
    fn triangle_is_ring3() {
        assert_eq!(ring(3).unwrap(), clique(3).unwrap());
    }

    #[test]
    fn crown_layout() {
        let g = crown(4).unwrap();
        assert_eq!(g.num_vertices(), 6);
        assert_eq!(g.num_edges(), 8);
        assert_eq!(g.neighbors(0), &[2]);
        assert_eq!(g.neighbors(1), &[2]);
        assert_eq!(g.degree(2), 5);
        let path = crown(2).unwrap();
        assert_eq!(path.edges(), &[(0, 2), (1, 2), (2, 3)]);
    }

    #[test]
    fn semi_crown_layout() {
        let g = semi_crown(4).unwrap();
        assert_eq!(g.num_edges(), 8);
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.neighbors(5), &[4]);
        assert!(g.laplacian().row_sums().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn ring_of_cliques_counts() {
        let g = ring_of_cliques(RingCliqueParams { n: 3, k: 4 }).unwrap();
        assert_eq!(g.num_vertices(), 12);
        assert_eq!(g.num_edges(), 21);
        // hexagon with chords: 3 clique edges + 3 ring edges
        let h = ring_of_cliques(RingCliqueParams { n: 3, k: 2 }).unwrap();
        assert_eq!(h.num_edges(), 6);
        assert_eq!(h.edges(), &[(0, 1), (0, 2), (0, 4), (2, 3), (2, 4), (4, 5)]);
    }

    #[test]
    fn connectivity() {
        assert!(clique(5).unwrap().is_connected());
        assert!(!Graph::empty(2).unwrap().is_connected());
        assert!(ring_of_cliques(RingCliqueParams { n: 4, k: 3 }).unwrap().is_connected());
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(g.is_connected_within(&[0, 1, 2]));
        assert!(!g.is_connected_within(&[0, 2]));
    }

    #[test]
    fn complement_of_clique_is_empty() {
        assert_eq!(clique(5).unwrap().complement().num_edges(), 0);
        let c = crown(4).unwrap().complement();
        let isolated = (0..6).filter(|&v| c.degree(v) == 0).count();
        assert_eq!(isolated, 1);
        assert_eq!(c.degree(2), 0);
    }

    #[test]
    fn transfer_requires_zero() {
        assert!(matches!(
            complement_eigen_transfer(&[1.0, 2.0], 2, 1e-8),
            Err(Error::InconsistentSpectrum(_))
        ));
        assert!(complement_eigen_transfer(&[0.0], 2, 1e-8).is_err());
        let empty = [0.0; 4];
        assert_eq!(complement_eigen_transfer(&empty, 4, 1e-8).unwrap(), vec![0.0, 4.0, 4.0, 4.0]);
    }
}
