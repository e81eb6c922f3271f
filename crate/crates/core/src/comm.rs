//! The partitioned communication matrix `W = Σ_ℓ L(G^ℓ) ⊗ e_ℓ e_ℓᵀ`.
//!
//! `W` is never stored densely. Each variable keeps the sparse Laplacian of
//! its subnet, and products are evaluated per block. Two layouts exist for
//! stacked vectors:
//!
//! * **compact** (production): node `i` stores only the slots of variables
//!   in `N_i`, node-major, variables ascending, block components ascending;
//! * **dense** (reference): `m · S` entries, node `i` owning
//!   `[i·S, (i+1)·S)`, where `S` is the total number of scalar slots.
//!
//! Both layouts evaluate `(L x)_i = scale · (deg(i)·x_i − Σ_j x_j)` with the
//! neighbours `j` visited in ascending order, so the results agree bit for
//! bit.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::dense::DenseSymMatrix;
use crate::graph::Graph;
use crate::partition::{self, Partition, VariableSubnet};
use crate::spectrum;
use crate::{Error, Result};

/// Eigenvalues at most `ZERO_REL_TOL · λmax` count as zero.
pub const ZERO_REL_TOL: f64 = 1e-9;

/// Sparse Laplacian of one variable's subnet, padded to all nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianBlock {
    variable: usize,
    dim: usize,
    slot_offset: usize,
    members: Vec<usize>,
    neighbors: Vec<Vec<usize>>,
    num_edges: usize,
    scale: f64,
    /// Compact index of component 0 of this variable at each node;
    /// `usize::MAX` for non-members.
    compact_offset: Vec<usize>,
}

impl LaplacianBlock {
    pub fn variable(&self) -> usize {
        self.variable
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Subnet neighbours of `node`, ascending.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// Multiplier applied to the block Laplacian (1 unless normalized).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Compact index of `(node, component)` if `node` stores this variable.
    pub fn compact_index(&self, node: usize, component: usize) -> Option<usize> {
        let off = self.compact_offset[node];
        (off != usize::MAX && component < self.dim).then_some(off + component)
    }

    /// Dense Laplacian restricted to the members, relabelled in member order.
    pub fn restricted_laplacian(&self) -> DenseSymMatrix {
        let mut local = vec![usize::MAX; self.neighbors.len()];
        for (r, &i) in self.members.iter().enumerate() {
            local[i] = r;
        }
        let mut l = DenseSymMatrix::zeros(self.members.len());
        for (r, &i) in self.members.iter().enumerate() {
            l.set(r, r, self.scale * self.neighbors[i].len() as f64);
            for &j in &self.neighbors[i] {
                l.set(r, local[j], -self.scale);
            }
        }
        l
    }

    /// Full `m × m` Laplacian including isolated padding vertices.
    pub fn padded_laplacian(&self) -> DenseSymMatrix {
        let m = self.neighbors.len();
        let mut l = DenseSymMatrix::zeros(m);
        for &i in &self.members {
            l.set(i, i, self.scale * self.neighbors[i].len() as f64);
            for &j in &self.neighbors[i] {
                l.set(i, j, -self.scale);
            }
        }
        l
    }

    /// `m` eigenvalues of the padded block, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut ev = self.restricted_laplacian().eigenvalues()?;
        ev.extend(core::iter::repeat_n(0.0, self.neighbors.len() - self.members.len()));
        Ok(spectrum::sorted(&ev))
    }

    #[inline]
    fn laplacian_entry(&self, node: usize, x_node: f64, mut neighbor_value: impl FnMut(usize) -> f64) -> f64 {
        let mut acc = self.neighbors[node].len() as f64 * x_node;
        for &j in &self.neighbors[node] {
            acc -= neighbor_value(j);
        }
        self.scale * acc
    }
}

/// Stacked vector `x ∈ ℝ^{m·S}` in one of the two layouts.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedVector {
    layout: Layout,
    values: Vec<f64>,
}

/// Storage layout of a [`StackedVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Dense,
    Compact,
}

impl StackedVector {
    pub fn dense(values: Vec<f64>) -> Self {
        Self { layout: Layout::Dense, values }
    }

    pub fn compact(values: Vec<f64>) -> Self {
        Self { layout: Layout::Compact, values }
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn inf_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(libm::fabs(*v)))
    }
}

/// `λmax` and smallest positive eigenvalue of a PSD operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBounds {
    pub lambda_max: f64,
    pub lambda_min_pos: f64,
}

impl SpectralBounds {
    pub fn condition_number(&self) -> f64 {
        self.lambda_max / self.lambda_min_pos
    }
}

/// Unique eigenvalues of `W` plus the block-concatenated multiset.
#[derive(Debug, Clone, PartialEq)]
pub struct CommSpectrum {
    pub unique: Vec<f64>,
    /// `m · S` eigenvalues: each block's `m` eigenvalues repeated `dim`
    /// times, sorted.
    pub multiset: Vec<f64>,
}

/// Result of a power-iteration run.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerEstimate {
    pub estimate: f64,
    /// Rayleigh quotient after each iteration.
    pub rayleigh: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommMatrix {
    num_nodes: usize,
    num_slots: usize,
    blocks: Vec<LaplacianBlock>,
    /// Compact range of node `i` is `node_offsets[i]..node_offsets[i + 1]`.
    node_offsets: Vec<usize>,
    /// Global slot index of every compact entry.
    compact_slots: Vec<usize>,
    /// Owning variable of every global slot.
    slot_var: Vec<usize>,
}

impl CommMatrix {
    /// Assembles `W` from subnets produced by
    /// [`partition::derive_subnets`]. Subnets must cover variables
    /// `0..n` in order and share one node count.
    pub fn build(subnets: &[VariableSubnet]) -> Result<Self> {
        let Some(first) = subnets.first() else {
            return Err(Error::InvalidParameter("no subnets given".into()));
        };
        let m = first.subgraph.num_vertices();
        for (l, s) in subnets.iter().enumerate() {
            if s.subgraph.num_vertices() != m {
                return Err(Error::DimensionMismatch { expected: m, found: s.subgraph.num_vertices() });
            }
            if s.variable != l {
                return Err(Error::InvalidParameter(format!(
                    "subnet {l} describes variable {}", s.variable
                )));
            }
            if s.dim == 0 {
                return Err(Error::InvalidParameter(format!("variable {l} has dimension 0")));
            }
            if let Some(&(i, j)) = s
                .subgraph
                .edges()
                .iter()
                .find(|(i, j)| s.members.binary_search(i).is_err() || s.members.binary_search(j).is_err())
            {
                return Err(Error::InvalidParameter(format!(
                    "edge ({i}, {j}) of variable {l} touches a non-member"
                )));
            }
        }

        // compact layout: node-major, variables ascending
        let mut node_vars: Vec<Vec<usize>> = vec![Vec::new(); m];
        for s in subnets {
            for &i in &s.members {
                node_vars[i].push(s.variable);
            }
        }
        let mut slot_offsets = Vec::with_capacity(subnets.len());
        let mut slot_var = Vec::new();
        for s in subnets {
            slot_offsets.push(slot_var.len());
            slot_var.extend(core::iter::repeat_n(s.variable, s.dim));
        }
        let mut node_offsets = Vec::with_capacity(m + 1);
        let mut compact_slots = Vec::new();
        let mut compact_offset = vec![vec![usize::MAX; m]; subnets.len()];
        for (i, vars) in node_vars.iter().enumerate() {
            node_offsets.push(compact_slots.len());
            for &l in vars {
                compact_offset[l][i] = compact_slots.len();
                compact_slots.extend(slot_offsets[l]..slot_offsets[l] + subnets[l].dim);
            }
        }
        node_offsets.push(compact_slots.len());

        let blocks = subnets
            .iter()
            .zip(compact_offset)
            .map(|(s, compact_offset)| LaplacianBlock {
                variable: s.variable,
                dim: s.dim,
                slot_offset: slot_offsets[s.variable],
                members: s.members.clone(),
                neighbors: (0..m).map(|i| s.subgraph.neighbors(i).to_vec()).collect(),
                num_edges: s.subgraph.num_edges(),
                scale: 1.0,
                compact_offset,
            })
            .collect();
        Ok(Self { num_nodes: m, num_slots: slot_var.len(), blocks, node_offsets, compact_slots, slot_var })
    }

    /// Derives the subnets of `part` on `base` and assembles `W`.
    pub fn from_partition(base: &Graph, part: &Partition) -> Result<Self> {
        Self::build(&partition::derive_subnets(base, part)?)
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_vars(&self) -> usize {
        self.blocks.len()
    }

    /// Total scalar slots `S`; dense vectors have `m · S` entries.
    #[inline]
    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    pub fn dense_len(&self) -> usize {
        self.num_nodes * self.num_slots
    }

    pub fn compact_len(&self) -> usize {
        self.compact_slots.len()
    }

    pub fn blocks(&self) -> &[LaplacianBlock] {
        &self.blocks
    }

    /// Compact index range owned by `node`.
    pub fn node_range(&self, node: usize) -> core::ops::Range<usize> {
        self.node_offsets[node]..self.node_offsets[node + 1]
    }

    /// Variable owning each compact entry of `node`, in storage order.
    pub fn node_entry_vars(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.compact_slots[self.node_range(node)].iter().map(|&s| self.slot_var[s])
    }

    /// Global slot of each compact entry.
    pub fn compact_slots(&self) -> &[usize] {
        &self.compact_slots
    }

    /// Scalars exchanged by one application: every subnet edge carries one
    /// scalar per block component in each direction.
    pub fn scalars_per_apply(&self) -> u64 {
        self.blocks.iter().map(|b| 2 * (b.num_edges * b.dim) as u64).sum()
    }

    fn check_len(&self, layout: Layout, len: usize) -> Result<()> {
        let expected = match layout {
            Layout::Dense => self.dense_len(),
            Layout::Compact => self.compact_len(),
        };
        if len != expected {
            return Err(Error::DimensionMismatch { expected, found: len });
        }
        Ok(())
    }

    pub fn zeros(&self, layout: Layout) -> StackedVector {
        let len = match layout {
            Layout::Dense => self.dense_len(),
            Layout::Compact => self.compact_len(),
        };
        StackedVector { layout, values: vec![0.0; len] }
    }

    /// Dense copy of a vector; off-support entries are zero.
    pub fn to_dense(&self, x: &StackedVector) -> Result<StackedVector> {
        self.check_len(x.layout, x.values.len())?;
        if x.layout == Layout::Dense {
            return Ok(x.clone());
        }
        let mut out = vec![0.0; self.dense_len()];
        for i in 0..self.num_nodes {
            for c in self.node_range(i) {
                out[i * self.num_slots + self.compact_slots[c]] = x.values[c];
            }
        }
        Ok(StackedVector::dense(out))
    }

    /// Compact copy of a vector; off-support entries of a dense input are
    /// dropped.
    pub fn to_compact(&self, x: &StackedVector) -> Result<StackedVector> {
        self.check_len(x.layout, x.values.len())?;
        if x.layout == Layout::Compact {
            return Ok(x.clone());
        }
        let mut out = Vec::with_capacity(self.compact_len());
        for i in 0..self.num_nodes {
            for c in self.node_range(i) {
                out.push(x.values[i * self.num_slots + self.compact_slots[c]]);
            }
        }
        Ok(StackedVector::compact(out))
    }

    /// `W x` in the layout of `x`.
    pub fn apply(&self, x: &StackedVector) -> Result<StackedVector> {
        self.check_len(x.layout, x.values.len())?;
        let mut out = vec![0.0; x.values.len()];
        match x.layout {
            Layout::Compact => self.apply_compact(&x.values, &mut out)?,
            Layout::Dense => self.apply_dense(&x.values, &mut out),
        }
        Ok(StackedVector { layout: x.layout, values: out })
    }

    /// `out = W x` on raw compact slices.
    pub fn apply_compact(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        self.check_len(Layout::Compact, x.len())?;
        self.check_len(Layout::Compact, out.len())?;
        for b in &self.blocks {
            for &i in &b.members {
                let off = b.compact_offset[i];
                for c in 0..b.dim {
                    out[off + c] = b.laplacian_entry(i, x[off + c], |j| x[b.compact_offset[j] + c]);
                }
            }
        }
        Ok(())
    }

    fn apply_dense(&self, x: &[f64], out: &mut [f64]) {
        let s = self.num_slots;
        for b in &self.blocks {
            for &i in &b.members {
                for c in 0..b.dim {
                    let slot = b.slot_offset + c;
                    out[i * s + slot] = b.laplacian_entry(i, x[i * s + slot], |j| x[j * s + slot]);
                }
            }
        }
    }

    /// `‖W x‖∞`.
    pub fn consensus_residual(&self, x: &StackedVector) -> Result<f64> {
        Ok(self.apply(x)?.inf_norm())
    }

    /// Whether `‖W x‖∞ ≤ tol`.
    pub fn is_consensus(&self, x: &StackedVector, tol: f64) -> Result<bool> {
        Ok(self.consensus_residual(x)? <= tol)
    }

    /// Explicit `m·S × m·S` matrix. Test oracle only.
    pub fn dense(&self) -> DenseSymMatrix {
        let s = self.num_slots;
        let mut w = DenseSymMatrix::zeros(self.dense_len());
        for b in &self.blocks {
            for &i in &b.members {
                for c in 0..b.dim {
                    let slot = b.slot_offset + c;
                    w.set(i * s + slot, i * s + slot, b.scale * b.neighbors[i].len() as f64);
                    for &j in &b.neighbors[i] {
                        w.set(i * s + slot, j * s + slot, -b.scale);
                    }
                }
            }
        }
        w
    }

    /// Nonzero entries `(row, col, value)` of the dense form, row-major.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let s = self.num_slots;
        let mut out = Vec::new();
        for i in 0..self.num_nodes {
            for slot in 0..s {
                let b = &self.blocks[self.slot_var[slot]];
                if b.compact_offset[i] == usize::MAX || b.neighbors[i].is_empty() {
                    continue;
                }
                let row = i * s + slot;
                let mut entries: Vec<(usize, usize, f64)> =
                    b.neighbors[i].iter().map(|&j| (row, j * s + slot, -b.scale)).collect();
                entries.push((row, row, b.scale * b.neighbors[i].len() as f64));
                entries.sort_by_key(|e| e.1);
                out.extend(entries);
            }
        }
        out
    }

    /// Per-block eigenvalues (each of length `m`), from a dense eigensolver
    /// on the restricted block only.
    pub fn block_spectra(&self) -> Result<Vec<Vec<f64>>> {
        self.blocks.iter().map(LaplacianBlock::eigenvalues).collect()
    }

    /// Spectrum of `W` as the union of the block spectra.
    pub fn spectrum(&self, tol: f64) -> Result<CommSpectrum> {
        let blocks = self.block_spectra()?;
        let mut unique = Vec::new();
        let mut multiset = Vec::with_capacity(self.dense_len());
        for (b, ev) in self.blocks.iter().zip(&blocks) {
            unique.extend(spectrum::unique_within(ev, tol));
            for _ in 0..b.dim {
                multiset.extend_from_slice(ev);
            }
        }
        Ok(CommSpectrum { unique: spectrum::unique_within(&unique, tol), multiset: spectrum::sorted(&multiset) })
    }

    /// `λmax(W) = max_ℓ λmax(L^ℓ)` and `λ⁺min(W) = min_ℓ λ⁺min(L^ℓ)`.
    ///
    /// Fails when a block has no positive eigenvalue (edgeless subnet).
    pub fn spectral_bounds(&self) -> Result<SpectralBounds> {
        let mut lambda_max: f64 = 0.0;
        let mut lambda_min_pos = f64::INFINITY;
        for (b, ev) in self.blocks.iter().zip(self.block_spectra()?) {
            let (max, min_pos) = positive_extremes(&ev).ok_or_else(|| {
                Error::DegenerateMatrix(format!("subnet of variable {} has no edges", b.variable))
            })?;
            lambda_max = lambda_max.max(max);
            lambda_min_pos = lambda_min_pos.min(min_pos);
        }
        Ok(SpectralBounds { lambda_max, lambda_min_pos })
    }

    /// `χ(W) = max_ℓ λmax(L^ℓ) / min_ℓ λ⁺min(L^ℓ)`.
    pub fn condition_number(&self) -> Result<f64> {
        Ok(self.spectral_bounds()?.condition_number())
    }

    /// Power-iteration estimate of `λmax(W)` from a seeded Gaussian start in
    /// the compact layout.
    pub fn power_iteration_lambda_max(&self, iters: usize, seed: u64) -> Result<PowerEstimate> {
        power_iteration(self.compact_len(), iters, seed, |x, y| {
            self.apply_compact(x, y).expect("lengths fixed by construction");
        })
    }

    /// Divides every block by the given `λmax` estimate.
    pub fn scale_normalize_with(&self, lambda_max: &[f64]) -> Result<Self> {
        if lambda_max.len() != self.blocks.len() {
            return Err(Error::DimensionMismatch { expected: self.blocks.len(), found: lambda_max.len() });
        }
        let mut out = self.clone();
        for (b, &lm) in out.blocks.iter_mut().zip(lambda_max) {
            if !(lm > 0.0 && lm.is_finite()) {
                return Err(Error::DegenerateMatrix(format!(
                    "variable {} has block λmax estimate {lm}",
                    b.variable
                )));
            }
            b.scale /= lm;
        }
        Ok(out)
    }

    /// Normalizes every block to `λmax ≈ 1` using per-block power iteration.
    pub fn scale_normalize(&self, iters: usize, seed: u64) -> Result<Self> {
        let estimates: Result<Vec<f64>> = self
            .blocks
            .iter()
            .map(|b| {
                let l = b.restricted_laplacian();
                power_iteration(l.order(), iters, seed ^ b.variable as u64, |x, y| {
                    for (r, v) in y.iter_mut().enumerate() {
                        *v = l.row(r).iter().zip(x).map(|(a, b)| a * b).sum();
                    }
                })
                .map(|p| p.estimate)
                .map_err(|_| Error::DegenerateMatrix(format!("subnet of variable {} has no edges", b.variable)))
            })
            .collect();
        self.scale_normalize_with(&estimates?)
    }
}

/// `(λmax, λ⁺min)` of a PSD spectrum, `None` when it is all zeros.
pub fn positive_extremes(eigenvalues: &[f64]) -> Option<(f64, f64)> {
    let max = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > 0.0) {
        return None;
    }
    let threshold = ZERO_REL_TOL * max;
    let min_pos = eigenvalues.iter().copied().filter(|&v| v > threshold).fold(f64::INFINITY, f64::min);
    Some((max, min_pos))
}

fn power_iteration(
    dim: usize,
    iters: usize,
    seed: u64,
    mut apply: impl FnMut(&[f64], &mut [f64]),
) -> Result<PowerEstimate> {
    if iters == 0 {
        return Err(Error::InvalidParameter("power iteration needs at least one step".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
    let norm = l2(&v);
    if norm == 0.0 {
        return Err(Error::DegenerateMatrix("empty operator".into()));
    }
    v.iter_mut().for_each(|x| *x /= norm);
    let mut y = vec![0.0; dim];
    let mut rayleigh = Vec::with_capacity(iters);
    for _ in 0..iters {
        apply(&v, &mut y);
        let r: f64 = v.iter().zip(&y).map(|(a, b)| a * b).sum();
        let norm = l2(&y);
        if norm == 0.0 {
            return Err(Error::DegenerateMatrix("operator annihilates the start vector".into()));
        }
        rayleigh.push(r);
        for (a, b) in v.iter_mut().zip(&y) {
            *a = b / norm;
        }
    }
    // Rayleigh quotient of the final iterate
    apply(&v, &mut y);
    let estimate = v.iter().zip(&y).map(|(a, b)| a * b).sum();
    rayleigh.push(estimate);
    Ok(PowerEstimate { estimate, rayleigh })
}

fn l2(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    fn example_2_2() -> CommMatrix {
        let g = Graph::new(3, &[(0, 1), (0, 2)]).unwrap();
        let p = Partition::new(3, 2, vec![vec![0, 1], vec![0], vec![1]]).unwrap();
        CommMatrix::from_partition(&g, &p).unwrap()
    }

    #[test]
    fn compact_layout_of_example() {
        let w = example_2_2();
        assert_eq!(w.compact_len(), 4);
        assert_eq!(w.node_range(0), 0..2);
        assert_eq!(w.node_entry_vars(2).collect::<Vec<_>>(), vec![1]);
        assert_eq!(w.scalars_per_apply(), 4);
    }

    #[test]
    fn dimension_errors() {
        let w = example_2_2();
        assert!(w.apply(&StackedVector::compact(vec![0.0; 3])).is_err());
        assert!(w.apply(&StackedVector::dense(vec![0.0; 4])).is_err());
        let a = partition::derive_subnets(
            &Graph::new(2, &[(0, 1)]).unwrap(),
            &Partition::new(2, 1, vec![vec![0]; 2]).unwrap(),
        )
        .unwrap();
        let b = partition::derive_subnets(
            &Graph::new(3, &[(0, 1), (1, 2)]).unwrap(),
            &Partition::new(3, 1, vec![vec![0]; 3]).unwrap(),
        )
        .unwrap();
        let mixed = vec![a[0].clone(), VariableSubnet { variable: 1, ..b[0].clone() }];
        assert!(matches!(CommMatrix::build(&mixed), Err(Error::DimensionMismatch { .. })));
        assert!(CommMatrix::build(&[]).is_err());
    }

    #[test]
    fn edgeless_block_is_degenerate() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let p = Partition::new(2, 2, vec![vec![0, 1], vec![0]]).unwrap();
        let w = CommMatrix::from_partition(&g, &p).unwrap();
        assert!(matches!(w.condition_number(), Err(Error::DegenerateMatrix(_))));
        assert!(w.scale_normalize(50, 1).is_err());
    }

    #[test]
    fn zero_matrix_power_iteration_fails() {
        let g = Graph::empty(1).unwrap();
        let p = Partition::new(1, 1, vec![vec![0]]).unwrap();
        let w = CommMatrix::from_partition(&g, &p).unwrap();
        assert!(matches!(w.power_iteration_lambda_max(10, 0), Err(Error::DegenerateMatrix(_))));
        assert!(w.power_iteration_lambda_max(0, 0).is_err());
    }

    #[test]
    fn multi_dimensional_blocks_repeat_slots() {
        let g = graph::clique(3).unwrap();
        let p = Partition::new(3, 2, vec![vec![0, 1], vec![0], vec![0, 1]])
            .unwrap()
            .with_dims(vec![2, 1])
            .unwrap();
        let w = CommMatrix::from_partition(&g, &p).unwrap();
        assert_eq!(w.num_slots(), 3);
        assert_eq!(w.compact_len(), 3 + 2 + 3);
        let l0 = g.laplacian();
        let d = w.dense();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.get(3 * i, 3 * j), l0.get(i, j));
                assert_eq!(d.get(3 * i + 1, 3 * j + 1), l0.get(i, j));
            }
        }
        assert_eq!(w.scalars_per_apply(), 2 * (3 * 2 + 1));
    }
}
