//! Gradient descent on `F(x) + (β/2) xᵀWx`.
//!
//! The fixed point sits `O(1/β)` away from the constrained optimum, so the
//! method stops on stationarity of the penalized objective rather than on
//! exact consensus.

use alloc::vec;

use super::{inf_norm, Exchange, MatrixExchange, QuadraticProblem, Run, SolverConfig, SolverOutcome};
use crate::comm::CommMatrix;
use crate::Result;

pub fn solve_penalty_gradient(p: &QuadraticProblem, w: &CommMatrix, config: &SolverConfig) -> Result<SolverOutcome> {
    solve_penalty_gradient_with(p, w, &mut MatrixExchange::new(w), config)
}

/// Step `η = 1/(L_F + β·λmax(W))` from `x₀ = 0`.
pub fn solve_penalty_gradient_with<E: Exchange + ?Sized>(
    p: &QuadraticProblem,
    w: &CommMatrix,
    ex: &mut E,
    config: &SolverConfig,
) -> Result<SolverOutcome> {
    let mut run = Run::new(p, w, config)?;
    let beta = config.beta;
    let lambda_max = w.spectral_bounds()?.lambda_max;
    let eta = 1.0 / (run.local.smoothness() + beta * lambda_max);

    let len = w.compact_len();
    let mut x = vec![0.0; len];
    let mut wx = vec![0.0; len];
    let mut grad = vec![0.0; len];
    let mut converged = false;
    for iter in 1..=config.max_iters {
        let s = ex.apply(&x, &mut wx)?;
        run.charge(s, 1);
        run.record(iter, &x, &wx)?;
        run.local.gradient(p, &x, &mut grad);
        for (g, v) in grad.iter_mut().zip(&wx) {
            *g += beta * v;
        }
        if inf_norm(&grad) <= config.tol {
            converged = true;
            break;
        }
        for (xi, g) in x.iter_mut().zip(&grad) {
            *xi -= eta * g;
        }
    }
    Ok(SolverOutcome { x, trace: run.trace, converged })
}
