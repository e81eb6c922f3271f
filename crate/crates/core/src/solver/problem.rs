//! Partitioned least-squares instances and their exact solution.
//!
//! Node `i` owns `f_i(x) = ‖A_i x − b_i‖² + (μ/2)‖x‖²` over the coordinates
//! of the variables in `N_i`. `A_i` is stored compactly: its columns are the
//! node's local slots (variables ascending, block components ascending),
//! which is also the node's segment of the compact stacked layout.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::dense::DenseSymMatrix;
use crate::linalg::Cholesky;
use crate::partition::Partition;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticProblem {
    partition: Partition,
    /// Row-major `rows_i × local_dim(i)` per node.
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    mu: f64,
    seed: Option<u64>,
}

impl QuadraticProblem {
    /// `a[i]` is row-major with `local_dim(i)` columns and `b[i].len()` rows.
    pub fn new(partition: Partition, a: Vec<Vec<f64>>, b: Vec<Vec<f64>>, mu: f64) -> Result<Self> {
        let m = partition.num_nodes();
        if a.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: a.len() });
        }
        if b.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: b.len() });
        }
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("μ must be finite and >= 0, got {mu}")));
        }
        for i in 0..m {
            let expected = b[i].len() * partition.local_dim(i);
            if a[i].len() != expected {
                return Err(Error::DimensionMismatch { expected, found: a[i].len() });
            }
            if a[i].iter().chain(&b[i]).any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!("node {i} has non-finite data")));
            }
        }
        Ok(Self { partition, a, b, mu, seed: None })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn num_nodes(&self) -> usize {
        self.partition.num_nodes()
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Seed the instance was generated from, if any.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Records the generator seed; it does not affect the data.
    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn rows(&self, node: usize) -> usize {
        self.b[node].len()
    }

    pub fn local_dim(&self, node: usize) -> usize {
        self.partition.local_dim(node)
    }

    /// Compact `A_i`, row-major over the local slots.
    pub fn a(&self, node: usize) -> &[f64] {
        &self.a[node]
    }

    pub fn b(&self, node: usize) -> &[f64] {
        &self.b[node]
    }

    /// `A_i` over all `S` global slots; columns outside `N_i` are zero.
    pub fn a_dense(&self, node: usize) -> Vec<f64> {
        let s = self.partition.num_slots();
        let slots = local_slots(&self.partition, node);
        let mut out = vec![0.0; self.rows(node) * s];
        for r in 0..self.rows(node) {
            for (c, &g) in slots.iter().enumerate() {
                out[r * s + g] = self.a[node][r * slots.len() + c];
            }
        }
        out
    }

    /// Length of a compact stacked vector.
    pub fn compact_len(&self) -> usize {
        (0..self.num_nodes()).map(|i| self.local_dim(i)).sum()
    }

    /// Copies a global vector into every node's local slots (compact layout).
    pub fn stack(&self, x: &[f64]) -> Result<Vec<f64>> {
        let s = self.partition.num_slots();
        if x.len() != s {
            return Err(Error::DimensionMismatch { expected: s, found: x.len() });
        }
        let mut out = Vec::with_capacity(self.compact_len());
        for i in 0..self.num_nodes() {
            out.extend(local_slots(&self.partition, i).into_iter().map(|g| x[g]));
        }
        Ok(out)
    }

    /// `f_i` at the local point `x_i`.
    pub fn local_objective(&self, node: usize, x: &[f64]) -> f64 {
        let d = self.local_dim(node);
        let mut value = 0.0;
        for (r, b) in self.b[node].iter().enumerate() {
            let row = &self.a[node][r * d..(r + 1) * d];
            let res: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - b;
            value += res * res;
        }
        value + 0.5 * self.mu * x.iter().map(|v| v * v).sum::<f64>()
    }

    /// `F(x) = Σ_i f_i(x_i)` on a compact stacked vector.
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        let len = self.compact_len();
        if x.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: x.len() });
        }
        let mut off = 0;
        let mut value = 0.0;
        for i in 0..self.num_nodes() {
            let d = self.local_dim(i);
            value += self.local_objective(i, &x[off..off + d]);
            off += d;
        }
        Ok(value)
    }

    /// Zero-pads every `A_i` to all variables and attaches the result to the
    /// all-variables partition. Regularization then covers every stored
    /// coordinate, so the embedded problem has its own minimizer.
    pub fn embed_full_vector(&self) -> Result<Self> {
        let m = self.num_nodes();
        let full = Partition::all_variables(m, self.partition.num_vars())?.with_dims(self.partition.dims().to_vec())?;
        let a = (0..m).map(|i| self.a_dense(i)).collect();
        let mut out = Self::new(full, a, self.b.clone(), self.mu)?;
        out.seed = self.seed;
        Ok(out)
    }
}

/// Global slots of node `i`'s local coordinates, in storage order.
pub fn local_slots(part: &Partition, node: usize) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(part.num_vars());
    let mut acc = 0;
    for &d in part.dims() {
        offsets.push(acc);
        acc += d;
    }
    part.deps(node).iter().flat_map(|&l| offsets[l]..offsets[l] + part.dim(l)).collect()
}

/// Draws `A_i` (on the columns of `N_i`) and `b_i` i.i.d. standard normal.
/// Node by node: all of `A_i` row-major, then `b_i`.
pub fn generate_problem(partition: &Partition, rows: usize, seed: u64, mu: f64) -> Result<QuadraticProblem> {
    if rows == 0 {
        return Err(Error::InvalidParameter("rows per node must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = Vec::with_capacity(partition.num_nodes());
    let mut b = Vec::with_capacity(partition.num_nodes());
    for i in 0..partition.num_nodes() {
        let d = partition.local_dim(i);
        a.push((0..rows * d).map(|_| StandardNormal.sample(&mut rng)).collect());
        b.push((0..rows).map(|_| StandardNormal.sample(&mut rng)).collect());
    }
    let mut p = QuadraticProblem::new(partition.clone(), a, b, mu)?;
    p.seed = Some(seed);
    Ok(p)
}

/// `H x = r` with `H = 2Σ A_iᵀA_i + μ·diag(copies)` and `r = 2Σ A_iᵀb_i`,
/// over the global slots.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalEquations {
    pub hessian: DenseSymMatrix,
    pub rhs: Vec<f64>,
}

impl NormalEquations {
    pub fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.hessian.mul_vec(x)?.iter().zip(&self.rhs).map(|(h, r)| h - r).collect())
    }
}

pub fn normal_equations(p: &QuadraticProblem) -> NormalEquations {
    let part = p.partition();
    let s = part.num_slots();
    let mut h = DenseSymMatrix::zeros(s);
    let mut rhs = vec![0.0; s];
    for i in 0..p.num_nodes() {
        let slots = local_slots(part, i);
        let d = slots.len();
        let a = p.a(i);
        for (r, &bv) in p.b(i).iter().enumerate() {
            let row = &a[r * d..(r + 1) * d];
            for (c1, &g1) in slots.iter().enumerate() {
                rhs[g1] += 2.0 * row[c1] * bv;
                for (c2, &g2) in slots.iter().enumerate().take(c1 + 1) {
                    h.add_sym(g1, g2, 2.0 * row[c1] * row[c2]);
                }
            }
        }
        for &g in &slots {
            h.add_sym(g, g, p.mu());
        }
    }
    NormalEquations { hessian: h, rhs }
}

/// Exact minimizer over consensual points and its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    /// One value per global slot.
    pub x: Vec<f64>,
    pub value: f64,
}

pub fn oracle_solution(p: &QuadraticProblem) -> Result<OracleSolution> {
    let ne = normal_equations(p);
    let chol = Cholesky::factor(ne.hessian.order(), ne.hessian.as_slice()).map_err(|_| {
        Error::NotStronglyConvex("aggregated Hessian is singular; use μ > 0".into())
    })?;
    let x = chol.solve(&ne.rhs)?;
    let value = p.objective(&p.stack(&x)?)?;
    Ok(OracleSolution { x, value })
}

/// Cached factorizations of the per-node systems `(2A_iᵀA_i + μI)`.
#[derive(Debug, Clone)]
pub struct LocalSolver {
    factors: Vec<Cholesky>,
    /// `2A_iᵀb_i` per node.
    base_rhs: Vec<Vec<f64>>,
    offsets: Vec<usize>,
    smoothness: f64,
}

impl LocalSolver {
    pub fn new(p: &QuadraticProblem) -> Result<Self> {
        let m = p.num_nodes();
        let mut factors = Vec::with_capacity(m);
        let mut base_rhs = Vec::with_capacity(m);
        let mut offsets = Vec::with_capacity(m + 1);
        let mut smoothness: f64 = 0.0;
        let mut off = 0;
        for i in 0..m {
            offsets.push(off);
            let d = p.local_dim(i);
            off += d;
            let a = p.a(i);
            let mut h = DenseSymMatrix::zeros(d);
            let mut rhs = vec![0.0; d];
            for (r, &bv) in p.b(i).iter().enumerate() {
                let row = &a[r * d..(r + 1) * d];
                for c1 in 0..d {
                    rhs[c1] += 2.0 * row[c1] * bv;
                    for c2 in 0..=c1 {
                        h.add_sym(c1, c2, 2.0 * row[c1] * row[c2]);
                    }
                }
            }
            for c in 0..d {
                h.add_sym(c, c, p.mu());
            }
            if d > 0 {
                let top = h.eigenvalues()?.last().copied().unwrap_or(0.0);
                smoothness = smoothness.max(top);
            }
            factors.push(Cholesky::factor(d, h.as_slice()).map_err(|_| Error::LocalDegeneracy { node: i })?);
            base_rhs.push(rhs);
        }
        offsets.push(off);
        Ok(Self { factors, base_rhs, offsets, smoothness })
    }

    /// `L_F = max_i λmax(2A_iᵀA_i) + μ`.
    pub fn smoothness(&self) -> f64 {
        self.smoothness
    }

    pub fn node_range(&self, node: usize) -> core::ops::Range<usize> {
        self.offsets[node]..self.offsets[node + 1]
    }

    /// Solves `(2A_iᵀA_i + μI) x_i = 2A_iᵀb_i − g_i` into `out`.
    pub fn local_argmin(&self, node: usize, g: &[f64], out: &mut [f64]) -> Result<()> {
        let rhs = &self.base_rhs[node];
        if g.len() != rhs.len() || out.len() != rhs.len() {
            return Err(Error::DimensionMismatch { expected: rhs.len(), found: g.len().min(out.len()) });
        }
        for ((o, r), gv) in out.iter_mut().zip(rhs).zip(g) {
            *o = r - gv;
        }
        self.factors[node].solve_in_place(out)
    }

    /// Local argmin at every node for a compact `g`.
    pub fn sweep(&self, g: &[f64], out: &mut [f64]) -> Result<()> {
        for i in 0..self.factors.len() {
            let r = self.node_range(i);
            self.local_argmin(i, &g[r.clone()], &mut out[r])?;
        }
        Ok(())
    }

    /// `∇F(x)` on a compact stacked vector: `(2A_iᵀA_i + μI)x_i − 2A_iᵀb_i`.
    pub fn gradient(&self, p: &QuadraticProblem, x: &[f64], out: &mut [f64]) {
        for i in 0..self.factors.len() {
            let r = self.node_range(i);
            let d = r.len();
            let (xi, gi) = (&x[r.clone()], &mut out[r]);
            for (c, g) in gi.iter_mut().enumerate() {
                *g = p.mu() * xi[c] - self.base_rhs[i][c];
            }
            let a = p.a(i);
            for row in a.chunks_exact(d.max(1)).take(p.rows(i)) {
                let ax: f64 = row.iter().zip(xi).map(|(a, v)| a * v).sum();
                for (g, av) in gi.iter_mut().zip(row) {
                    *g += 2.0 * av * ax;
                }
            }
        }
    }
}
