//! Per-iteration solver records.

use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    /// `|F(x) − F*|`.
    pub obj_gap: f64,
    /// `‖W x‖∞`.
    pub consensus_inf: f64,
    /// `‖x − x*‖₂` over the compact stacked vector.
    pub dist_to_opt: f64,
    /// Cumulative scalars exchanged.
    pub comm_scalars: u64,
    /// Cumulative applications of `W`.
    pub w_applies: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverTrace {
    pub rows: Vec<TraceRow>,
}

impl SolverTrace {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// First row whose distance to the optimum is at most `target`.
    pub fn first_within(&self, target: f64) -> Option<&TraceRow> {
        self.rows.iter().find(|r| r.dist_to_opt <= target)
    }

    /// Whether `dist_to_opt` never increases over the last `fraction` of
    /// the rows.
    pub fn tail_nonincreasing(&self, fraction: f64) -> bool {
        let n = self.rows.len();
        let take = libm::ceil(n as f64 * fraction) as usize;
        self.rows[n - take.min(n)..].windows(2).all(|w| w[1].dist_to_opt <= w[0].dist_to_opt)
    }
}
