//! CSV tables. Floats are written in shortest round-trip form, so equal
//! inputs give byte-identical files.

use std::path::Path;

use anyhow::Context;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Csv {
    pub n: usize,
    pub k: usize,
    #[serde(rename = "chi_W")]
    pub chi_w: f64,
    #[serde(rename = "chi_L")]
    pub chi_l: f64,
    #[serde(rename = "chi_W_over_k")]
    pub chi_w_over_k: f64,
    #[serde(rename = "chi_L_over_n2k2")]
    pub chi_l_over_n2k2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectraCsv {
    pub family: String,
    pub n: Option<usize>,
    pub k: usize,
    pub max_deviation: Option<f64>,
    pub pass: bool,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceCsv {
    pub iter: usize,
    pub obj_gap: f64,
    pub consensus_inf: f64,
    pub dist_to_opt: f64,
    pub comm_scalars: u64,
    pub w_applies: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundCsv {
    pub round: usize,
    pub sender: usize,
    pub receiver: usize,
    pub variable: usize,
}

/// Writes `rows` with a header row derived from the field names.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for r in rows {
        w.serialize(r).with_context(|| format!("writing {}", path.display()))?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn trace_rows(trace: &partopt_core::solver::SolverTrace) -> Vec<TraceCsv> {
    trace
        .rows
        .iter()
        .map(|r| TraceCsv {
            iter: r.iter,
            obj_gap: r.obj_gap,
            consensus_inf: r.consensus_inf,
            dist_to_opt: r.dist_to_opt,
            comm_scalars: r.comm_scalars,
            w_applies: r.w_applies,
        })
        .collect()
}

pub fn round_rows(logs: &[partopt_core::simnet::RoundLog]) -> Vec<RoundCsv> {
    logs.iter()
        .flat_map(|log| {
            log.messages.iter().map(move |&(sender, receiver, variable)| RoundCsv { round: log.round, sender, receiver, variable })
        })
        .collect()
}
