//! Partitioned communication matrices for decentralized optimization.
//!
//! When every node of a network only depends on a subset of the global
//! variables, each variable gets its own communication subnet and the
//! consensus constraint becomes `W x = 0` with
//!
//! ```text
//! W = Σ_ℓ L(G^ℓ) ⊗ e_ℓ e_ℓᵀ
//! ```
//!
//! This crate builds `W` from a base graph and a variable [`partition`],
//! applies it on the compact per-node storage layout, computes its spectrum
//! block by block, and ships closed-form spectra for the crown / semi-crown /
//! ring-of-cliques families ([`spectra`]). The [`solver`] module runs
//! decentralized least-squares solvers whose communication cost is driven by
//! the condition number of `W`, and [`simnet`] replays every `W` application
//! as per-edge scalar messages.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, experiments and
//! the command-line driver live in the `partopt` crate.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod comm;
pub mod dense;
mod error;
pub mod graph;
pub mod linalg;
pub mod partition;
pub mod simnet;
pub mod solver;
pub mod spectra;
pub mod spectrum;
pub mod stats;

pub use comm::{CommMatrix, Layout, SpectralBounds, StackedVector};
pub use dense::DenseSymMatrix;
pub use error::{Error, Result};
pub use graph::{Graph, RingCliqueParams};
pub use partition::{Partition, VariableSubnet, Violation};
