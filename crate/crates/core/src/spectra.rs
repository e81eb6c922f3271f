//! Closed-form Laplacian spectra of the structured families and the
//! condition-number laws built on them.
//!
//! The ring-of-cliques Laplacian `I_n ⊗ L(G_C) + L(G_R) ⊗ e₁e₁ᵀ` splits
//! into `n` blocks `L(G_C) + λ_i e₁e₁ᵀ`, one per ring eigenvalue
//! `λ_i = 2 − 2cos(2πi/n)`. Each block has eigenvalue `k` with multiplicity
//! `k − 2` and the two roots `θ₁(λ) ≥ θ₂(λ)` of
//! `θ² − (k + λ)θ + λ = 0`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::graph::RingCliqueParams;
use crate::spectrum;
use crate::{Error, Result};

/// Values closer than this are treated as one eigenvalue when merging
/// multiplicities.
pub const MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Crown,
    SemiCrown,
    RingOfCliques,
}

impl core::fmt::Display for Family {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Family::Crown => "crown",
            Family::SemiCrown => "semi-crown",
            Family::RingOfCliques => "ring-of-cliques",
        })
    }
}

/// Closed-form spectrum of one family member.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub family: Family,
    /// Ring length; `None` for single-clique families.
    pub n: Option<usize>,
    pub k: usize,
    /// Distinct eigenvalues with multiplicities, ascending.
    pub eigenvalues: Vec<(f64, usize)>,
    pub lambda_max: f64,
    pub lambda_min_pos: f64,
    pub chi: f64,
}

impl SpectrumReport {
    fn from_pairs(family: Family, n: Option<usize>, k: usize, pairs: &[(f64, usize)]) -> Self {
        let eigenvalues = spectrum::merge_multiplicities(pairs, MERGE_TOL);
        let lambda_max = eigenvalues.last().map_or(0.0, |e| e.0);
        let lambda_min_pos = eigenvalues
            .iter()
            .map(|e| e.0)
            .find(|&v| v > crate::comm::ZERO_REL_TOL * lambda_max)
            .unwrap_or(f64::NAN);
        Self { family, n, k, eigenvalues, lambda_max, lambda_min_pos, chi: lambda_max / lambda_min_pos }
    }

    /// Sorted multiset of eigenvalues.
    pub fn multiset(&self) -> Vec<f64> {
        spectrum::expand(&self.eigenvalues)
    }

    /// Sum of multiplicities, equal to the vertex count.
    pub fn vertex_count(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.1).sum()
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().map(|&(v, m)| v * m as f64).sum()
    }
}

fn discriminant(k: f64, lambda: f64) -> f64 {
    (lambda * lambda + 2.0 * (k - 2.0) * lambda + k * k).max(0.0)
}

/// Larger non-trivial eigenvalue of `L(K_k) + λ e₁e₁ᵀ`.
pub fn theta1(k: usize, lambda: f64) -> f64 {
    let k = k as f64;
    (k + lambda + libm::sqrt(discriminant(k, lambda))) / 2.0
}

/// Smaller non-trivial eigenvalue of `L(K_k) + λ e₁e₁ᵀ`.
///
/// Evaluated as `2λ / (k + λ + √D)`, which equals `(k + λ − √D)/2` but does
/// not cancel for small `λ`.
pub fn theta2(k: usize, lambda: f64) -> f64 {
    let kf = k as f64;
    2.0 * lambda / (kf + lambda + libm::sqrt(discriminant(kf, lambda)))
}

/// Spectrum of `L(K_k) + λ e₁e₁ᵀ`: `θ₁(λ)`, `θ₂(λ)` and `k` with
/// multiplicity `k − 2`. At `λ = 0` this is the clique spectrum
/// `{0, k×(k−1)}`.
pub fn clique_perturbed_spectrum(k: usize, lambda: f64) -> Result<Vec<(f64, usize)>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("clique size must be >= 2, got {k}")));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("perturbation must be finite and >= 0, got {lambda}")));
    }
    Ok(spectrum::merge_multiplicities(
        &[(theta2(k, lambda), 1), (k as f64, k - 2), (theta1(k, lambda), 1)],
        MERGE_TOL,
    ))
}

/// `{0, 1×2, k×(k−2), k+2}`, so `χ = k + 2`.
pub fn crown_spectrum(k: usize) -> Result<SpectrumReport> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("crown needs k >= 2, got {k}")));
    }
    let kf = k as f64;
    Ok(SpectrumReport::from_pairs(
        Family::Crown,
        None,
        k,
        &[(0.0, 1), (1.0, 2), (kf, k - 2), (kf + 2.0, 1)],
    ))
}

/// `{0, k×(k−3), (k+2±√(k²+4))/2, (k+2±√(k²−4))/2}`.
pub fn semi_crown_spectrum(k: usize) -> Result<SpectrumReport> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("semi-crown needs k >= 3, got {k}")));
    }
    let kf = k as f64;
    let wide = libm::sqrt(kf * kf + 4.0);
    let narrow = libm::sqrt(kf * kf - 4.0);
    Ok(SpectrumReport::from_pairs(
        Family::SemiCrown,
        None,
        k,
        &[
            (0.0, 1),
            (kf, k - 3),
            ((kf + 2.0 + wide) / 2.0, 1),
            ((kf + 2.0 - wide) / 2.0, 1),
            ((kf + 2.0 + narrow) / 2.0, 1),
            ((kf + 2.0 - narrow) / 2.0, 1),
        ],
    ))
}

/// Laplacian eigenvalues `2 − 2cos(2πi/n)` of the `n`-cycle, `i = 0..n`.
pub fn ring_eigenvalues(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 - 2.0 * libm::cos(2.0 * PI * i as f64 / n as f64)).collect()
}

/// Union over the ring eigenvalues of the perturbed-clique spectra.
///
/// `λ⁺min = θ₂(2 − 2cos(2π/n))` because `θ₂` increases in `λ`; `λmax` is the
/// largest `θ₁` over the discrete ring spectrum.
pub fn ring_clique_spectrum(params: RingCliqueParams) -> Result<SpectrumReport> {
    let RingCliqueParams { n, k } = RingCliqueParams::new(params.n, params.k)?;
    let mut pairs = Vec::with_capacity(3 * n);
    for lambda in ring_eigenvalues(n) {
        pairs.extend(clique_perturbed_spectrum(k, lambda)?);
    }
    let mut report = SpectrumReport::from_pairs(Family::RingOfCliques, Some(n), k, &pairs);
    report.lambda_min_pos = theta2(k, 2.0 - 2.0 * libm::cos(2.0 * PI / n as f64));
    report.lambda_max = ring_eigenvalues(n).into_iter().map(|l| theta1(k, l)).fold(0.0, f64::max);
    report.chi = report.lambda_max / report.lambda_min_pos;
    Ok(report)
}

/// Upper bound `θ₁(4)` on `λmax(L(G_RC))`, valid for every ring length.
///
/// `θ₁` increases in `λ` and ring eigenvalues never exceed 4.
pub fn ring_clique_lambda_max_bound(k: usize) -> f64 {
    theta1(k, 4.0)
}

/// Leading-order approximation `4π²/(n²k)` of `λ⁺min(L(G_RC))`.
pub fn lambda_min_taylor(n: usize, k: usize) -> f64 {
    4.0 * PI * PI / ((n * n * k) as f64)
}

/// One row of the condition-number comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Row {
    pub n: usize,
    pub k: usize,
    pub chi_w: f64,
    pub chi_l: f64,
    pub chi_w_over_k: f64,
    pub chi_l_over_n2k2: f64,
}

/// Condition numbers of `W` and `L(G_RC)` over a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Table {
    pub rows: Vec<Theorem1Row>,
}

/// Largest allowed max/min spread of a normalized ratio over the grid.
pub const THETA_BAND: f64 = 3.0;

impl Theorem1Table {
    /// `(min, max)` of `χ(W)/k`.
    pub fn chi_w_ratio_range(&self) -> (f64, f64) {
        range(self.rows.iter().map(|r| r.chi_w_over_k))
    }

    /// `(min, max)` of `χ(L)/(n²k²)`.
    pub fn chi_l_ratio_range(&self) -> (f64, f64) {
        range(self.rows.iter().map(|r| r.chi_l_over_n2k2))
    }

    /// Both normalized ratios stay within a factor [`THETA_BAND`].
    pub fn within_band(&self) -> bool {
        let (a, b) = self.chi_w_ratio_range();
        let (c, d) = self.chi_l_ratio_range();
        b / a <= THETA_BAND && d / c <= THETA_BAND
    }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// `χ(W)` from the crown spectrum (all crowns are isomorphic) and
/// `χ(L(G_RC))` from the ring-of-cliques closed form, per grid point.
pub fn theorem1_check(grid: &[RingCliqueParams]) -> Result<Theorem1Table> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty parameter grid".into()));
    }
    let rows = grid
        .iter()
        .map(|&p| {
            let chi_w = crown_spectrum(p.k)?.chi;
            let chi_l = ring_clique_spectrum(p)?.chi;
            let (n, k) = (p.n as f64, p.k as f64);
            Ok(Theorem1Row {
                n: p.n,
                k: p.k,
                chi_w,
                chi_l,
                chi_w_over_k: chi_w / k,
                chi_l_over_n2k2: chi_l / (n * n * k * k),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Theorem1Table { rows })
}

/// Cartesian grid `ns × ks`, rows in `n`-major order.
pub fn grid(ns: &[usize], ks: &[usize]) -> Result<Vec<RingCliqueParams>> {
    let mut out = vec![];
    for &n in ns {
        for &k in ks {
            out.push(RingCliqueParams::new(n, k)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crown_small_cases() {
        let r = crown_spectrum(4).unwrap();
        assert_eq!(r.multiset(), vec![0.0, 1.0, 1.0, 4.0, 4.0, 6.0]);
        assert_eq!(r.chi, 6.0);
        assert_eq!(crown_spectrum(2).unwrap().multiset(), vec![0.0, 1.0, 1.0, 4.0]);
        assert!(crown_spectrum(1).is_err());
    }

    #[test]
    fn perturbed_clique_at_zero_is_clique() {
        let s = clique_perturbed_spectrum(4, 0.0).unwrap();
        assert_eq!(s, vec![(0.0, 1), (4.0, 3)]);
        assert!(clique_perturbed_spectrum(4, -1.0).is_err());
        assert!(clique_perturbed_spectrum(1, 1.0).is_err());
    }

    #[test]
    fn perturbed_clique_k4_lambda2() {
        let s = clique_perturbed_spectrum(4, 2.0).unwrap();
        let r7 = libm::sqrt(7.0);
        assert_eq!(s.len(), 3);
        assert!((s[0].0 - (3.0 - r7)).abs() < 1e-14);
        assert_eq!(s[1], (4.0, 2));
        assert!((s[2].0 - (3.0 + r7)).abs() < 1e-14);
    }

    #[test]
    fn stable_theta2_matches_textbook_form() {
        for k in 2..10 {
            for i in 0..50 {
                let l = 0.08 * i as f64;
                let kf = k as f64;
                let naive = (kf + l - libm::sqrt(l * l + 2.0 * (kf - 2.0) * l + kf * kf)) / 2.0;
                assert!((theta2(k, l) - naive).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn taylor_single_point() {
        assert!((lambda_min_taylor(3, 2) - 4.0 * PI * PI / 18.0).abs() < 1e-15);
    }

    #[test]
    fn empty_grid_rejected() {
        assert!(theorem1_check(&[]).is_err());
    }
}
