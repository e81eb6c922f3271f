//! Decentralized solvers for partitioned least squares.
//!
//! Both methods work on the compact stacked layout and reach `W` only
//! through an [`Exchange`], so the same code runs against the matrix or
//! against the message-level simulation in [`crate::simnet`].

mod chebyshev;
mod dual;
mod penalty;
mod problem;
mod trace;

use alloc::format;
use alloc::vec::Vec;

pub use chebyshev::ChebyshevFilter;
pub use dual::{solve_dual_accelerated, solve_dual_accelerated_with, DualFunction};
pub use penalty::{solve_penalty_gradient, solve_penalty_gradient_with};
pub use problem::{
    generate_problem, local_slots, normal_equations, oracle_solution, LocalSolver, NormalEquations,
    OracleSolution, QuadraticProblem,
};
pub use trace::{SolverTrace, TraceRow};

use crate::comm::CommMatrix;
use crate::graph::Graph;
use crate::{Error, Result};

/// One application of `W` on compact vectors.
pub trait Exchange {
    /// Writes `W x` into `out` and returns the number of scalars sent.
    fn apply(&mut self, x: &[f64], out: &mut [f64]) -> Result<u64>;
}

/// Applies `W` directly from the sparse blocks.
#[derive(Debug, Clone, Copy)]
pub struct MatrixExchange<'a> {
    w: &'a CommMatrix,
    per_apply: u64,
}

impl<'a> MatrixExchange<'a> {
    pub fn new(w: &'a CommMatrix) -> Self {
        Self { w, per_apply: w.scalars_per_apply() }
    }
}

impl Exchange for MatrixExchange<'_> {
    fn apply(&mut self, x: &[f64], out: &mut [f64]) -> Result<u64> {
        self.w.apply_compact(x, out)?;
        Ok(self.per_apply)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    PenaltyGradient,
    DualAccelerated,
}

/// Chebyshev acceleration of the dual method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chebyshev {
    Off,
    /// Degree `⌈√χ(W)⌉`.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    pub max_iters: usize,
    pub tol: f64,
    /// Penalty weight; only read by the penalty method.
    pub beta: f64,
    pub chebyshev: Chebyshev,
    /// Seed of the generated instance, carried for reporting.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::DualAccelerated,
            max_iters: 100_000,
            tol: 1e-8,
            beta: 100.0,
            chebyshev: Chebyshev::Auto,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance must be > 0, got {}", self.tol)));
        }
        if self.method == Method::PenaltyGradient && !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("β must be > 0, got {}", self.beta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOutcome {
    /// Final compact stacked iterate.
    pub x: Vec<f64>,
    pub trace: SolverTrace,
    pub converged: bool,
}

/// Runs the configured method with the matrix-backed exchange.
pub fn solve(p: &QuadraticProblem, w: &CommMatrix, config: &SolverConfig) -> Result<SolverOutcome> {
    solve_with(p, w, &mut MatrixExchange::new(w), config)
}

/// Runs the configured method, routing every `W` application through `ex`.
pub fn solve_with<E: Exchange + ?Sized>(
    p: &QuadraticProblem,
    w: &CommMatrix,
    ex: &mut E,
    config: &SolverConfig,
) -> Result<SolverOutcome> {
    match config.method {
        Method::PenaltyGradient => solve_penalty_gradient_with(p, w, ex, config),
        Method::DualAccelerated => solve_dual_accelerated_with(p, w, ex, config),
    }
}

/// Scalars per round for the partitioned matrix and for the full-vector
/// scheme over the base graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommCost {
    pub partitioned: u64,
    pub full_vector: u64,
    pub ratio: f64,
}

pub fn communication_cost_per_round(base: &Graph, w: &CommMatrix) -> Result<CommCost> {
    if base.num_vertices() != w.num_nodes() {
        return Err(Error::DimensionMismatch { expected: w.num_nodes(), found: base.num_vertices() });
    }
    let partitioned = w.scalars_per_apply();
    let full_vector = 2 * (base.num_edges() * w.num_slots()) as u64;
    Ok(CommCost { partitioned, full_vector, ratio: partitioned as f64 / full_vector as f64 })
}

/// Shared per-run state: oracle, local factorizations and trace bookkeeping.
struct Run<'a> {
    p: &'a QuadraticProblem,
    local: LocalSolver,
    x_star: Vec<f64>,
    f_star: f64,
    trace: SolverTrace,
    scalars: u64,
    applies: u64,
}

impl<'a> Run<'a> {
    fn new(p: &'a QuadraticProblem, w: &CommMatrix, config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        if w.num_nodes() != p.num_nodes() {
            return Err(Error::DimensionMismatch { expected: w.num_nodes(), found: p.num_nodes() });
        }
        for i in 0..p.num_nodes() {
            if w.node_range(i).len() != p.local_dim(i) {
                return Err(Error::DimensionMismatch { expected: w.node_range(i).len(), found: p.local_dim(i) });
            }
        }
        let local = LocalSolver::new(p)?;
        let oracle = oracle_solution(p)?;
        Ok(Self {
            p,
            local,
            x_star: p.stack(&oracle.x)?,
            f_star: oracle.value,
            trace: SolverTrace::default(),
            scalars: 0,
            applies: 0,
        })
    }

    fn charge(&mut self, scalars: u64, applies: u64) {
        self.scalars += scalars;
        self.applies += applies;
    }

    fn record(&mut self, iter: usize, x: &[f64], wx: &[f64]) -> Result<()> {
        if x.iter().chain(wx).any(|v| !v.is_finite()) {
            return Err(Error::Divergence { iteration: iter });
        }
        let dist = libm::sqrt(x.iter().zip(&self.x_star).map(|(a, b)| (a - b) * (a - b)).sum());
        self.trace.rows.push(TraceRow {
            iter,
            obj_gap: libm::fabs(self.p.objective(x)? - self.f_star),
            consensus_inf: inf_norm(wx),
            dist_to_opt: dist,
            comm_scalars: self.scalars,
            w_applies: self.applies,
        });
        Ok(())
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(libm::fabs(*x)))
}
