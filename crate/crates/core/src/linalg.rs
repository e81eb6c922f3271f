//! Dense Cholesky factorization for the small SPD systems of the solvers.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Pivots at most this fraction of the largest diagonal entry are rejected.
pub const PIVOT_REL_TOL: f64 = 1e-13;

/// Lower-triangular factor `L` of an SPD matrix `M = L Lᵀ`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    order: usize,
    lower: Vec<f64>,
}

impl Cholesky {
    /// Factors the row-major `order × order` matrix `m`. Only the lower
    /// triangle is read.
    pub fn factor(order: usize, m: &[f64]) -> Result<Self> {
        if m.len() != order * order {
            return Err(Error::DimensionMismatch { expected: order * order, found: m.len() });
        }
        // pivots below this are rounding noise of a singular matrix
        let floor = PIVOT_REL_TOL * (0..order).map(|i| libm::fabs(m[i * order + i])).fold(0.0, f64::max);
        let mut l = vec![0.0; order * order];
        for i in 0..order {
            for j in 0..=i {
                let mut s = m[i * order + j];
                for k in 0..j {
                    s -= l[i * order + k] * l[j * order + k];
                }
                if i == j {
                    if !(s > floor) || !s.is_finite() {
                        return Err(Error::NotStronglyConvex(format!("pivot {i} is {s}")));
                    }
                    l[i * order + i] = libm::sqrt(s);
                } else {
                    l[i * order + j] = s / l[j * order + j];
                }
            }
        }
        Ok(Self { order, lower: l })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Solves `M x = b` in place.
    #[allow(clippy::needless_range_loop)]
    pub fn solve_in_place(&self, b: &mut [f64]) -> Result<()> {
        let n = self.order;
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len() });
        }
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.lower[i * n + k] * b[k];
            }
            b[i] = s / self.lower[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..n {
                s -= self.lower[k * n + i] * b[k];
            }
            b[i] = s / self.lower[i * n + i];
        }
        Ok(())
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }
}
