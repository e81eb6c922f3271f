//! Variable dependencies per node and the per-variable communication subnets
//! derived from them.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, RingCliqueParams};
use crate::{Error, Result};

/// Which variables each node's local function depends on.
///
/// Construction only checks structure (index ranges, duplicates, lengths).
/// The framework assumptions (no orphan variable, no empty dependency set,
/// connected subnets) are reported by [`validate`] and enforced by
/// [`derive_subnets`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    num_nodes: usize,
    num_vars: usize,
    deps: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

impl Partition {
    /// `deps[i]` lists the variables node `i` depends on. Lists are sorted;
    /// repeated entries are rejected.
    pub fn new(num_nodes: usize, num_vars: usize, deps: Vec<Vec<usize>>) -> Result<Self> {
        if deps.len() != num_nodes {
            return Err(Error::DimensionMismatch { expected: num_nodes, found: deps.len() });
        }
        let mut deps = deps;
        for (i, list) in deps.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(&bad) = list.iter().find(|&&l| l >= num_vars) {
                return Err(Error::InvalidPartition(format!(
                    "node {i} depends on variable {bad}, but there are only {num_vars} variables"
                )));
            }
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidPartition(format!("node {i} lists a variable twice")));
            }
        }
        Ok(Self { num_nodes, num_vars, deps, dims: vec![1; num_vars] })
    }

    /// Every node depends on every variable (the classic full-vector setup).
    pub fn all_variables(num_nodes: usize, num_vars: usize) -> Result<Self> {
        Self::new(num_nodes, num_vars, vec![(0..num_vars).collect(); num_nodes])
    }

    /// Assigns a block dimension to every variable (default 1).
    pub fn with_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        if dims.len() != self.num_vars {
            return Err(Error::DimensionMismatch { expected: self.num_vars, found: dims.len() });
        }
        if let Some(l) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidPartition(format!("variable {l} has dimension 0")));
        }
        self.dims = dims;
        Ok(self)
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    #[inline]
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Sorted dependency set `N_i`.
    pub fn deps(&self, node: usize) -> &[usize] {
        &self.deps[node]
    }

    pub fn all_deps(&self) -> &[Vec<usize>] {
        &self.deps
    }

    pub fn dim(&self, var: usize) -> usize {
        self.dims[var]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total scalar slots `Σ_ℓ dim(ℓ)`.
    pub fn num_slots(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Scalars stored at `node`.
    pub fn local_dim(&self, node: usize) -> usize {
        self.deps[node].iter().map(|&l| self.dims[l]).sum()
    }

    /// Nodes depending on `var`, ascending (`V^ℓ`).
    pub fn members(&self, var: usize) -> Vec<usize> {
        (0..self.num_nodes).filter(|&i| self.deps[i].binary_search(&var).is_ok()).collect()
    }

    pub fn depends(&self, node: usize, var: usize) -> bool {
        self.deps[node].binary_search(&var).is_ok()
    }

    /// Number of nodes holding a copy of each variable.
    pub fn copy_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_vars];
        for list in &self.deps {
            for &l in list {
                counts[l] += 1;
            }
        }
        counts
    }
}

/// Communication subnet of one variable, padded to all `m` nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSubnet {
    pub variable: usize,
    pub dim: usize,
    /// `V^ℓ`, ascending.
    pub members: Vec<usize>,
    /// `G^ℓ` on all nodes; vertices outside `members` are isolated.
    pub subgraph: Graph,
}

impl VariableSubnet {
    /// The subnet restricted to its members (`G̃^ℓ`), relabelled in member
    /// order.
    pub fn restricted(&self) -> Result<Graph> {
        self.subgraph.induced(&self.members)
    }
}

/// A violated framework assumption.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    NodeCountMismatch { graph: usize, partition: usize },
    OrphanVariable { variable: usize },
    EmptyDependencies { node: usize },
    DisconnectedSubnet { variable: usize },
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Violation::NodeCountMismatch { graph, partition } => {
                write!(f, "graph has {graph} nodes but partition has {partition}")
            }
            Violation::OrphanVariable { variable } => {
                write!(f, "variable {variable} is used by no node")
            }
            Violation::EmptyDependencies { node } => write!(f, "node {node} depends on no variable"),
            Violation::DisconnectedSubnet { variable } => {
                write!(f, "subnet of variable {variable} is disconnected")
            }
        }
    }
}

fn subnet_edges(base: &Graph, part: &Partition, var: usize) -> Vec<(usize, usize)> {
    base.edges()
        .iter()
        .copied()
        .filter(|&(i, j)| part.depends(i, var) && part.depends(j, var))
        .collect()
}

/// Lists every violated assumption; empty when the pair is usable.
pub fn validate(base: &Graph, part: &Partition) -> Vec<Violation> {
    let mut out = Vec::new();
    if base.num_vertices() != part.num_nodes() {
        out.push(Violation::NodeCountMismatch {
            graph: base.num_vertices(),
            partition: part.num_nodes(),
        });
        return out;
    }
    for node in 0..part.num_nodes() {
        if part.deps(node).is_empty() {
            out.push(Violation::EmptyDependencies { node });
        }
    }
    for (variable, &count) in part.copy_counts().iter().enumerate() {
        if count == 0 {
            out.push(Violation::OrphanVariable { variable });
        } else if !base.is_connected_within(&part.members(variable)) {
            // the base edges between members are exactly E^ℓ
            out.push(Violation::DisconnectedSubnet { variable });
        }
    }
    out
}

/// One subnet per variable with `E^ℓ = {(i, j) ∈ E : ℓ ∈ N_i ∩ N_j}`.
///
/// Disconnected subnets are rejected, not repaired.
pub fn derive_subnets(base: &Graph, part: &Partition) -> Result<Vec<VariableSubnet>> {
    if let Some(v) = validate(base, part).first() {
        return Err(match *v {
            Violation::NodeCountMismatch { graph, partition } => {
                Error::DimensionMismatch { expected: graph, found: partition }
            }
            Violation::DisconnectedSubnet { variable } => Error::PartitionInfeasible { variable },
            other => Error::InvalidPartition(format!("{other}")),
        });
    }
    (0..part.num_vars())
        .map(|variable| {
            Ok(VariableSubnet {
                variable,
                dim: part.dim(variable),
                members: part.members(variable),
                subgraph: Graph::new(part.num_nodes(), &subnet_edges(base, part, variable))?,
            })
        })
        .collect()
}

/// Dependencies of the ring-of-cliques example: clique `ℓ` owns variable
/// `ℓ`; negotiators also depend on the variables of both neighbouring
/// cliques.
pub fn crown_partition(params: RingCliqueParams) -> Result<Partition> {
    let RingCliqueParams { n, k } = RingCliqueParams::new(params.n, params.k)?;
    let mut deps = Vec::with_capacity(n * k);
    for l in 0..n {
        deps.push(vec![(l + n - 1) % n, l, (l + 1) % n]);
        for _ in 1..k {
            deps.push(vec![l]);
        }
    }
    for list in &mut deps {
        list.sort_unstable();
        list.dedup();
    }
    Partition::new(n * k, n, deps)
}
