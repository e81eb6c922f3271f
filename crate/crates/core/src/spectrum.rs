//! Helpers for comparing eigenvalue multisets.

use alloc::vec::Vec;

/// Default absolute tolerance for eigenvalue comparisons.
pub const DEFAULT_TOL: f64 = 1e-8;

pub fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Largest absolute deviation between two multisets after sorting, or `None`
/// when their cardinalities differ.
pub fn max_abs_deviation(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let (a, b) = (sorted(a), sorted(b));
    Some(a.iter().zip(&b).map(|(x, y)| libm::fabs(x - y)).fold(0.0, f64::max))
}

pub fn multisets_match(a: &[f64], b: &[f64], tol: f64) -> bool {
    max_abs_deviation(a, b).is_some_and(|d| d <= tol)
}

/// Collapses a multiset into distinct values: sorted values closer than
/// `tol` to the first member of the current cluster are merged.
pub fn unique_within(values: &[f64], tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for v in sorted(values) {
        match out.last() {
            Some(&last) if v - last <= tol => {}
            _ => out.push(v),
        }
    }
    out
}

/// Whether two sets of distinct values match pairwise within `tol`.
pub fn unique_sets_match(a: &[f64], b: &[f64], tol: f64) -> bool {
    let (a, b) = (unique_within(a, tol), unique_within(b, tol));
    a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| libm::fabs(x - y) <= tol)
}

/// Merges `(value, multiplicity)` pairs whose values lie within `tol`,
/// drops zero multiplicities, and sorts by value.
pub fn merge_multiplicities(pairs: &[(f64, usize)], tol: f64) -> Vec<(f64, usize)> {
    let mut items: Vec<(f64, usize)> = pairs.iter().copied().filter(|&(_, m)| m > 0).collect();
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, usize)> = Vec::new();
    for (v, m) in items {
        match out.last_mut() {
            Some(last) if v - last.0 <= tol => last.1 += m,
            _ => out.push((v, m)),
        }
    }
    out
}

/// Expands `(value, multiplicity)` pairs into a sorted multiset.
pub fn expand(pairs: &[(f64, usize)]) -> Vec<f64> {
    let mut out = Vec::new();
    for &(v, m) in pairs {
        out.extend(core::iter::repeat_n(v, m));
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Number of eigenvalues with magnitude at most `tol`.
pub fn count_zeros(values: &[f64], tol: f64) -> usize {
    values.iter().filter(|v| libm::fabs(**v) <= tol).count()
}
