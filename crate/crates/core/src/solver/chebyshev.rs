//! Shifted and scaled Chebyshev filter `P_K(W)`.
//!
//! With `t(λ) = (b + a − 2λ)/(b − a)` mapping `[a, b] = [λ⁺min, λmax]` onto
//! `[−1, 1]` and `τ_j = T_j(t(0))`,
//!
//! ```text
//! P_K(λ) = s · (1 − T_K(t(λ)) / τ_K),   s = 1 / (1 + 1/τ_K)
//! ```
//!
//! vanishes at `λ = 0` and maps `[a, b]` into `[(1 − ε)/(1 + ε), 1]` with
//! `ε = 1/τ_K`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::Exchange;
use crate::comm::SpectralBounds;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevFilter {
    degree: usize,
    a: f64,
    b: f64,
    /// `τ_0 ..= τ_K`.
    tau: Vec<f64>,
    scale: f64,
}

impl ChebyshevFilter {
    /// Filter of degree `⌈√χ⌉` for the given bounds.
    pub fn auto(bounds: SpectralBounds) -> Result<Self> {
        let chi = bounds.condition_number();
        if !chi.is_finite() || chi < 1.0 {
            return Err(Error::InvalidParameter(format!("condition number {chi} is not usable")));
        }
        // guard against √χ landing a hair above an integer
        let degree = libm::ceil(libm::sqrt(chi) - 1e-12).max(1.0) as usize;
        Self::new(degree, bounds)
    }

    pub fn new(degree: usize, bounds: SpectralBounds) -> Result<Self> {
        let SpectralBounds { lambda_max: b, lambda_min_pos: a } = bounds;
        if degree == 0 {
            return Err(Error::InvalidParameter("Chebyshev degree must be >= 1".into()));
        }
        if !(a > 0.0 && b >= a && b.is_finite()) {
            return Err(Error::InvalidParameter(format!("invalid spectral interval [{a}, {b}]")));
        }
        if degree > 1 && b == a {
            return Err(Error::InvalidParameter("degenerate interval needs degree 1".into()));
        }
        let mut tau = vec![1.0];
        let mut scale = 1.0 / b;
        if degree > 1 {
            let t0 = (b + a) / (b - a);
            tau.push(t0);
            for j in 1..degree {
                tau.push(2.0 * t0 * tau[j] - tau[j - 1]);
            }
            scale = 1.0 / (1.0 + 1.0 / tau[degree]);
        }
        Ok(Self { degree, a, b, tau, scale })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `ε = 1/τ_K`; zero for degree 1, where the filter is `W / λmax`.
    pub fn epsilon(&self) -> f64 {
        if self.degree == 1 {
            0.0
        } else {
            1.0 / self.tau[self.degree]
        }
    }

    /// Bounds on the image of `[λ⁺min, λmax]`.
    pub fn image_bounds(&self) -> SpectralBounds {
        if self.degree == 1 {
            return SpectralBounds { lambda_max: 1.0, lambda_min_pos: self.a / self.b };
        }
        let e = self.epsilon();
        SpectralBounds { lambda_max: 1.0, lambda_min_pos: (1.0 - e) / (1.0 + e) }
    }

    /// Scalar polynomial `P_K(λ)`.
    pub fn eval(&self, lambda: f64) -> f64 {
        if self.degree == 1 {
            return lambda / self.b;
        }
        let t = (self.b + self.a - 2.0 * lambda) / (self.b - self.a);
        let (mut prev, mut cur) = (1.0, t);
        for _ in 1..self.degree {
            let next = 2.0 * t * cur - prev;
            prev = cur;
            cur = next;
        }
        self.scale * (1.0 - cur / self.tau[self.degree])
    }

    /// `out = P_K(W) x` using `K` applications of `W` through `ex`.
    ///
    /// `wx` receives `W x`, the first application. Returns the scalars
    /// communicated.
    pub fn apply<E: Exchange + ?Sized>(&self, ex: &mut E, x: &[f64], out: &mut [f64], wx: &mut [f64]) -> Result<u64> {
        let mut scalars = ex.apply(x, wx)?;
        if self.degree == 1 {
            for (o, v) in out.iter_mut().zip(wx.iter()) {
                *o = v / self.b;
            }
            return Ok(scalars);
        }
        let (a, b) = (self.a, self.b);
        let shift = |v: f64, wv: f64| ((b + a) * v - 2.0 * wv) / (b - a);
        // u_j = T_j(t(W)) x / τ_j
        let mut prev = x.to_vec();
        let mut cur: Vec<f64> = x.iter().zip(wx.iter()).map(|(&v, &w)| shift(v, w) / self.tau[1]).collect();
        let mut w_cur = vec![0.0; x.len()];
        for j in 1..self.degree {
            scalars += ex.apply(&cur, &mut w_cur)?;
            let c1 = 2.0 * self.tau[j] / self.tau[j + 1];
            let c0 = self.tau[j - 1] / self.tau[j + 1];
            for ((p, c), w) in prev.iter_mut().zip(cur.iter_mut()).zip(&w_cur) {
                let next = c1 * shift(*c, *w) - c0 * *p;
                *p = *c;
                *c = next;
            }
        }
        for ((o, v), u) in out.iter_mut().zip(x).zip(&cur) {
            *o = self.scale * (v - u);
        }
        Ok(scalars)
    }
}
