//! Accelerated ascent on `φ(y) = min_x F(x) + ⟨y, P x⟩`, with `P = W` or
//! `P = P_K(W)`.
//!
//! Only `P y` is ever needed, so the iteration tracks `P y_t` and `P w_t`
//! directly: one outer step costs `P x(w)` (the gradient) and `P(P x(w))`.

use alloc::vec;
use alloc::vec::Vec;

use super::{inf_norm, Chebyshev, ChebyshevFilter, Exchange, MatrixExchange, Run, SolverConfig, SolverOutcome};
use super::{LocalSolver, QuadraticProblem};
use crate::comm::CommMatrix;
use crate::{Error, Result};

/// `P = W` or its Chebyshev filter, applied through an exchange.
enum Operator {
    Plain,
    Filter(ChebyshevFilter),
}

impl Operator {
    fn applies(&self) -> u64 {
        match self {
            Operator::Plain => 1,
            Operator::Filter(f) => f.degree() as u64,
        }
    }

    fn apply<E: Exchange + ?Sized>(&self, ex: &mut E, x: &[f64], out: &mut [f64], wx: &mut [f64]) -> Result<u64> {
        match self {
            Operator::Plain => {
                let s = ex.apply(x, out)?;
                wx.copy_from_slice(out);
                Ok(s)
            }
            Operator::Filter(f) => f.apply(ex, x, out, wx),
        }
    }
}

fn operator(w: &CommMatrix, mode: Chebyshev) -> Result<(Operator, f64, f64)> {
    let bounds = w.spectral_bounds()?;
    Ok(match mode {
        Chebyshev::Off => (Operator::Plain, bounds.lambda_max, bounds.lambda_min_pos),
        Chebyshev::Auto => {
            let f = ChebyshevFilter::auto(bounds)?;
            let img = f.image_bounds();
            (Operator::Filter(f), img.lambda_max, img.lambda_min_pos)
        }
    })
}

pub fn solve_dual_accelerated(p: &QuadraticProblem, w: &CommMatrix, config: &SolverConfig) -> Result<SolverOutcome> {
    solve_dual_accelerated_with(p, w, &mut MatrixExchange::new(w), config)
}

/// Step `1/L_φ` with `L_φ = p_max²/μ`, momentum `(1 − q)/(1 + q)` with
/// `q = √(σ/L_φ)`, `σ = p_min²/L_F`, and `y₀ = 0`.
pub fn solve_dual_accelerated_with<E: Exchange + ?Sized>(
    p: &QuadraticProblem,
    w: &CommMatrix,
    ex: &mut E,
    config: &SolverConfig,
) -> Result<SolverOutcome> {
    if !(p.mu() > 0.0) {
        return Err(Error::Precondition("the dual method needs μ > 0".into()));
    }
    let mut run = Run::new(p, w, config)?;
    let (op, p_max, p_min) = operator(w, config.chebyshev)?;
    let l_phi = p_max * p_max / p.mu();
    let sigma = p_min * p_min / run.local.smoothness();
    let q = libm::sqrt(sigma / l_phi);
    let momentum = (1.0 - q) / (1.0 + q);
    let eta = 1.0 / l_phi;

    let len = w.compact_len();
    let mut py = vec![0.0; len];
    let mut pw = vec![0.0; len];
    let mut x = vec![0.0; len];
    let mut g = vec![0.0; len];
    let mut pg = vec![0.0; len];
    let mut wx = vec![0.0; len];
    let mut scratch = vec![0.0; len];
    // result of a zero-iteration run
    run.local.sweep(&pw, &mut x)?;
    let mut converged = false;
    for iter in 1..=config.max_iters {
        run.local.sweep(&pw, &mut x)?;
        let s = op.apply(ex, &x, &mut g, &mut wx)?;
        run.charge(s, op.applies());
        run.record(iter, &x, &wx)?;
        if inf_norm(&g) <= config.tol && inf_norm(&wx) <= config.tol {
            converged = true;
            break;
        }
        let s = op.apply(ex, &g, &mut pg, &mut scratch)?;
        run.charge(s, op.applies());
        for i in 0..len {
            let py_next = pw[i] + eta * pg[i];
            pw[i] = py_next + momentum * (py_next - py[i]);
            py[i] = py_next;
        }
        if pw.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { iteration: iter });
        }
    }
    Ok(SolverOutcome { x, trace: run.trace, converged })
}

/// `φ` and its gradient for a fixed operator, for checking the analytic
/// gradient against finite differences.
pub struct DualFunction<'a> {
    p: &'a QuadraticProblem,
    w: &'a CommMatrix,
    local: LocalSolver,
    op: Operator,
}

impl<'a> DualFunction<'a> {
    pub fn new(p: &'a QuadraticProblem, w: &'a CommMatrix, chebyshev: Chebyshev) -> Result<Self> {
        let (op, _, _) = operator(w, chebyshev)?;
        Ok(Self { p, w, local: LocalSolver::new(p)?, op })
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; x.len()];
        let mut wx = vec![0.0; x.len()];
        self.op.apply(&mut MatrixExchange::new(self.w), x, &mut out, &mut wx)?;
        Ok(out)
    }

    /// Minimizer `x(y)` of the Lagrangian.
    pub fn argmin(&self, y: &[f64]) -> Result<Vec<f64>> {
        let py = self.apply(y)?;
        let mut x = vec![0.0; y.len()];
        self.local.sweep(&py, &mut x)?;
        Ok(x)
    }

    /// `φ(y) = F(x(y)) + ⟨P y, x(y)⟩`.
    pub fn value(&self, y: &[f64]) -> Result<f64> {
        let py = self.apply(y)?;
        let mut x = vec![0.0; y.len()];
        self.local.sweep(&py, &mut x)?;
        Ok(self.p.objective(&x)? + py.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>())
    }

    /// `∇φ(y) = P x(y)`.
    pub fn gradient(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.apply(&self.argmin(y)?)
    }
}
