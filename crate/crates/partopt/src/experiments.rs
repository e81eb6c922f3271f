//! The four experiments behind the command-line verbs.

use std::fmt::Write as _;

use anyhow::Context;
use partopt_core::graph::{self, RingCliqueParams};
use partopt_core::solver::{
    self, generate_problem, oracle_solution, Chebyshev, ChebyshevFilter, CommCost, Method, QuadraticProblem,
    SolverConfig, SolverOutcome, SolverTrace,
};
use partopt_core::spectra::{self, Theorem1Table};
use partopt_core::spectrum::max_abs_deviation;
use partopt_core::{simnet, stats, CommMatrix, DenseSymMatrix, StackedVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Experiment, ExperimentConfig};
use crate::fixtures;
use crate::output::{self, SpectraCsv, Theorem1Csv};

/// Largest deviation tolerated between closed-form and numeric spectra.
pub const SPECTRUM_TOL: f64 = 1e-8;

/// Result of one experiment: whether its gate passed and a printable summary.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    pub summary: String,
}

pub fn run(cfg: &ExperimentConfig) -> anyhow::Result<Outcome> {
    cfg.validate()?;
    if cfg.experiment != Experiment::Example22 {
        std::fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    }
    match cfg.experiment {
        Experiment::Theorem1 => cmd_theorem1(cfg),
        Experiment::SpectraVerify => cmd_spectra_verify(cfg),
        Experiment::SolverCompare => cmd_solver_compare(cfg),
        Experiment::Example22 => Ok(cmd_example_2_2()),
    }
}

fn grid(cfg: &ExperimentConfig) -> anyhow::Result<Vec<RingCliqueParams>> {
    Ok(spectra::grid(&cfg.n_list, &cfg.k_list)?)
}

// --- theorem1 -------------------------------------------------------------

/// Log-log slopes of the condition numbers, each fitted on the upper half of
/// its parameter range.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Slopes {
    /// `(k, slope of χ(L) against n)`.
    pub chi_l_vs_n: Vec<(usize, f64)>,
    /// `(n, slope of χ(L) against k)`.
    pub chi_l_vs_k: Vec<(usize, f64)>,
    /// Slope of `χ(W)` against `k`.
    pub chi_w_vs_k: Option<f64>,
}

fn upper_half(values: &[usize]) -> Vec<usize> {
    let mut v = values.to_vec();
    v.sort_unstable();
    v.dedup();
    let keep = v.len().div_ceil(2).max(2).min(v.len());
    v.split_off(v.len() - keep)
}

pub fn theorem1_slopes(table: &Theorem1Table, ns: &[usize], ks: &[usize]) -> Theorem1Slopes {
    let lookup = |n: usize, k: usize| table.rows.iter().find(|r| r.n == n && r.k == k);
    let fit = |pts: Vec<(f64, f64)>| {
        let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        stats::loglog_slope(&x, &y).ok()
    };
    let (top_n, top_k) = (upper_half(ns), upper_half(ks));
    let mut chi_l_vs_n = Vec::new();
    for &k in ks {
        let pts = top_n.iter().filter_map(|&n| lookup(n, k).map(|r| (n as f64, r.chi_l))).collect();
        if let Some(s) = fit(pts) {
            chi_l_vs_n.push((k, s));
        }
    }
    let mut chi_l_vs_k = Vec::new();
    for &n in ns {
        let pts = top_k.iter().filter_map(|&k| lookup(n, k).map(|r| (k as f64, r.chi_l))).collect();
        if let Some(s) = fit(pts) {
            chi_l_vs_k.push((n, s));
        }
    }
    let chi_w_vs_k = ns
        .first()
        .and_then(|&n| fit(top_k.iter().filter_map(|&k| lookup(n, k).map(|r| (k as f64, r.chi_w))).collect()));
    Theorem1Slopes { chi_l_vs_n, chi_l_vs_k, chi_w_vs_k }
}

pub fn cmd_theorem1(cfg: &ExperimentConfig) -> anyhow::Result<Outcome> {
    let table = spectra::theorem1_check(&grid(cfg)?)?;
    let rows: Vec<Theorem1Csv> = table
        .rows
        .iter()
        .map(|r| Theorem1Csv {
            n: r.n,
            k: r.k,
            chi_w: r.chi_w,
            chi_l: r.chi_l,
            chi_w_over_k: r.chi_w_over_k,
            chi_l_over_n2k2: r.chi_l_over_n2k2,
        })
        .collect();
    let path = cfg.out.join("theorem1.csv");
    output::write_csv(&path, &rows)?;

    let (wa, wb) = table.chi_w_ratio_range();
    let (la, lb) = table.chi_l_ratio_range();
    let pass = table.within_band();
    let slopes = theorem1_slopes(&table, &cfg.n_list, &cfg.k_list);
    let mut s = String::new();
    writeln!(s, "theorem1: {} grid points -> {}", table.rows.len(), path.display())?;
    writeln!(s, "  chi_W/k          in [{wa:.4}, {wb:.4}]  spread {:.3}", wb / wa)?;
    writeln!(s, "  chi_L/(n^2 k^2)  in [{la:.4}, {lb:.4}]  spread {:.3}", lb / la)?;
    for (k, v) in &slopes.chi_l_vs_n {
        writeln!(s, "  slope chi_L vs n at k={k}: {v:.3}")?;
    }
    for (n, v) in &slopes.chi_l_vs_k {
        writeln!(s, "  slope chi_L vs k at n={n}: {v:.3}")?;
    }
    if let Some(v) = slopes.chi_w_vs_k {
        writeln!(s, "  slope chi_W vs k: {v:.3}")?;
    }
    writeln!(s, "  factor-{} band: {}", spectra::THETA_BAND, if pass { "PASS" } else { "FAIL" })?;
    Ok(Outcome { pass, summary: s })
}

// --- spectra-verify -------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Job {
    Crown(usize),
    SemiCrown(usize),
    Ring(usize, usize),
}

fn verify(job: Job) -> SpectraCsv {
    let (family, n, k) = match job {
        Job::Crown(k) => ("crown", None, k),
        Job::SemiCrown(k) => ("semi-crown", None, k),
        Job::Ring(n, k) => ("ring-of-cliques", Some(n), k),
    };
    let result = (|| -> partopt_core::Result<f64> {
        let (closed, g) = match job {
            Job::Crown(k) => (spectra::crown_spectrum(k)?, graph::crown(k)?),
            Job::SemiCrown(k) => (spectra::semi_crown_spectrum(k)?, graph::semi_crown(k)?),
            Job::Ring(n, k) => {
                let p = RingCliqueParams::new(n, k)?;
                (spectra::ring_clique_spectrum(p)?, graph::ring_of_cliques(p)?)
            }
        };
        let numeric = g.laplacian_spectrum()?;
        Ok(max_abs_deviation(&numeric, &closed.multiset()).unwrap_or(f64::INFINITY))
    })();
    match result {
        Ok(d) => SpectraCsv { family: family.into(), n, k, max_deviation: Some(d), pass: d <= SPECTRUM_TOL, error: String::new() },
        Err(e) => SpectraCsv { family: family.into(), n, k, max_deviation: None, pass: false, error: e.to_string() },
    }
}

pub fn cmd_spectra_verify(cfg: &ExperimentConfig) -> anyhow::Result<Outcome> {
    let (crown_ks, semi_ks): (Vec<usize>, Vec<usize>) = if cfg.custom_grid {
        (cfg.k_list.iter().copied().filter(|&k| k >= 2).collect(), cfg.k_list.iter().copied().filter(|&k| k >= 3).collect())
    } else {
        ((2..=64).collect(), (3..=32).collect())
    };
    let mut jobs: Vec<Job> = crown_ks.into_iter().map(Job::Crown).collect();
    jobs.extend(semi_ks.into_iter().map(Job::SemiCrown));
    for &n in &cfg.n_list {
        for &k in &cfg.k_list {
            jobs.push(Job::Ring(n, k));
        }
    }
    let rows: Vec<SpectraCsv> = jobs.par_iter().map(|&j| verify(j)).collect();
    let path = cfg.out.join("spectra_verify.csv");
    output::write_csv(&path, &rows)?;

    let pass = rows.iter().all(|r| r.pass);
    let mut s = String::new();
    writeln!(s, "spectra-verify: {} checks -> {}", rows.len(), path.display())?;
    for family in ["crown", "semi-crown", "ring-of-cliques"] {
        let fam: Vec<&SpectraCsv> = rows.iter().filter(|r| r.family == family).collect();
        if fam.is_empty() {
            continue;
        }
        let worst = fam.iter().map(|r| r.max_deviation.unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
        let failed = fam.iter().filter(|r| !r.pass).count();
        writeln!(s, "  {family:<16} {:>3} points  max deviation {worst:.2e}  failures {failed}", fam.len())?;
    }
    for r in rows.iter().filter(|r| !r.error.is_empty()) {
        let n = r.n.map_or(String::new(), |n| format!(" n={n}"));
        writeln!(s, "  error at {}{n} k={}: {}", r.family, r.k, r.error)?;
    }
    writeln!(s, "  tolerance {SPECTRUM_TOL:e}: {}", if pass { "PASS" } else { "FAIL" })?;
    Ok(Outcome { pass, summary: s })
}

// --- solver-compare -------------------------------------------------------

/// Communication needed by one solver run to reach `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantResult {
    pub chi: f64,
    /// Chebyshev degree, 0 when off.
    pub degree: usize,
    pub target: f64,
    /// `(w_applies, scalars)` at the first iterate within `target`.
    pub to_target: Option<(u64, u64)>,
    pub final_dist: f64,
    pub outcome: SolverOutcome,
}

fn stacked_norm(p: &QuadraticProblem) -> partopt_core::Result<f64> {
    let x = p.stack(&oracle_solution(p)?.x)?;
    Ok(x.iter().map(|v| v * v).sum::<f64>().sqrt())
}

/// Runs the dual method and reads off the communication spent until
/// `‖x − x*‖ ≤ 1e−6(1 + ‖x*‖)`.
pub fn run_variant(
    p: &QuadraticProblem,
    w: &CommMatrix,
    config: &SolverConfig,
    simulate: bool,
) -> partopt_core::Result<(VariantResult, Vec<simnet::RoundLog>)> {
    let bounds = w.spectral_bounds()?;
    let degree = match config.chebyshev {
        Chebyshev::Off => 0,
        Chebyshev::Auto => ChebyshevFilter::auto(bounds)?.degree(),
    };
    let target = 1e-6 * (1.0 + stacked_norm(p)?);
    let (outcome, logs) = if simulate {
        let run = simnet::run_distributed_solver(p, w, config, true)?;
        (run.outcome, run.logs)
    } else {
        (solver::solve(p, w, config)?, Vec::new())
    };
    let to_target = outcome.trace.first_within(target).map(|r| (r.w_applies, r.comm_scalars));
    let final_dist = outcome.trace.last().map_or(f64::NAN, |r| r.dist_to_opt);
    Ok((VariantResult { chi: bounds.condition_number(), degree, target, to_target, final_dist, outcome }, logs))
}

/// One grid point of the partitioned vs full-vector comparison.
#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub n: usize,
    pub k: usize,
    pub chi_w: Option<f64>,
    pub chi_full: Option<f64>,
    pub degree_w: Option<usize>,
    pub degree_full: Option<usize>,
    pub applies_w: Option<u64>,
    pub applies_full: Option<u64>,
    pub scalars_w: Option<u64>,
    pub scalars_full: Option<u64>,
    pub applies_ratio: Option<f64>,
    pub scalars_ratio: Option<f64>,
    pub status: String,
}

impl CompareRow {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }

    /// Partitioned run strictly cheaper in `W` applications.
    pub fn partitioned_cheaper(&self) -> bool {
        matches!((self.applies_w, self.applies_full), (Some(a), Some(b)) if a < b)
    }
}

/// Partitioned problem on the crown partition and its zero-padded
/// full-vector embedding, both solved with the dual method.
/// Everything one grid point produces.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub row: CompareRow,
    pub trace_w: Option<SolverTrace>,
    pub trace_full: Option<SolverTrace>,
    /// Present only for verbose runs, which go through the simulator.
    pub rounds: Vec<simnet::RoundLog>,
    pub problem: Option<QuadraticProblem>,
    pub w: Option<CommMatrix>,
}

pub fn compare_point(n: usize, k: usize, cfg: &ExperimentConfig) -> PointResult {
    let mut row = CompareRow {
        n,
        k,
        chi_w: None,
        chi_full: None,
        degree_w: None,
        degree_full: None,
        applies_w: None,
        applies_full: None,
        scalars_w: None,
        scalars_full: None,
        applies_ratio: None,
        scalars_ratio: None,
        status: String::new(),
    };
    let config = SolverConfig {
        method: Method::DualAccelerated,
        max_iters: cfg.max_iters,
        tol: cfg.tol,
        chebyshev: cfg.cheb,
        seed: cfg.seed,
        ..SolverConfig::default()
    };
    let mut out = PointResult { row: row.clone(), trace_w: None, trace_full: None, rounds: Vec::new(), problem: None, w: None };
    let result = (|| -> partopt_core::Result<()> {
        let (g, part, w) = fixtures::ring_clique_instance(n, k)?;
        let p = generate_problem(&part, cfg.rows, cfg.seed, cfg.mu)?;
        let full_p = p.embed_full_vector()?;
        let full_w = CommMatrix::from_partition(&g, full_p.partition())?;
        let (pw, logs) = run_variant(&p, &w, &config, cfg.verbose)?;
        let (pf, _) = run_variant(&full_p, &full_w, &config, false)?;
        row.chi_w = Some(pw.chi);
        row.chi_full = Some(pf.chi);
        row.degree_w = Some(pw.degree);
        row.degree_full = Some(pf.degree);
        row.applies_w = pw.to_target.map(|t| t.0);
        row.scalars_w = pw.to_target.map(|t| t.1);
        row.applies_full = pf.to_target.map(|t| t.0);
        row.scalars_full = pf.to_target.map(|t| t.1);
        if let (Some(a), Some(b)) = (pw.to_target, pf.to_target) {
            row.applies_ratio = Some(a.0 as f64 / b.0 as f64);
            row.scalars_ratio = Some(a.1 as f64 / b.1 as f64);
        }
        out.trace_w = Some(pw.outcome.trace);
        out.trace_full = Some(pf.outcome.trace);
        out.rounds = logs;
        out.problem = Some(p);
        out.w = Some(w);
        Ok(())
    })();
    row.status = match result {
        Ok(()) => match (row.applies_w, row.applies_full) {
            (Some(_), Some(_)) => "ok".into(),
            (None, _) => "partitioned run did not reach the target".into(),
            (_, None) => "full-vector run did not reach the target".into(),
        },
        Err(e) => format!("failed: {e}"),
    };
    out.row = row;
    out
}

/// Slope of `log(applies)` against `log(k)` per fixed `n`, for each variant.
pub fn comm_slopes(rows: &[CompareRow]) -> Vec<(usize, Option<f64>, Option<f64>)> {
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ns.dedup();
    ns.into_iter()
        .map(|n| {
            let at_n: Vec<&CompareRow> = rows.iter().filter(|r| r.n == n).collect();
            let fit = |get: fn(&CompareRow) -> Option<u64>| {
                let pts: Option<Vec<(f64, f64)>> = at_n.iter().map(|r| get(r).map(|a| (r.k as f64, a as f64))).collect();
                let (x, y): (Vec<f64>, Vec<f64>) = pts?.into_iter().unzip();
                stats::loglog_slope(&x, &y).ok()
            };
            (n, fit(|r| r.applies_w), fit(|r| r.applies_full))
        })
        .collect()
}

pub fn cmd_solver_compare(cfg: &ExperimentConfig) -> anyhow::Result<Outcome> {
    let points: Vec<(usize, usize)> = cfg.n_list.iter().flat_map(|&n| cfg.k_list.iter().map(move |&k| (n, k))).collect();
    let results: Vec<PointResult> = points.par_iter().map(|&(n, k)| compare_point(n, k, cfg)).collect();
    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        let tag = format!("n{}_k{}", r.row.n, r.row.k);
        if let Some(t) = &r.trace_w {
            output::write_csv(&cfg.out.join(format!("trace_partitioned_{tag}.csv")), &output::trace_rows(t))?;
        }
        if let Some(t) = &r.trace_full {
            output::write_csv(&cfg.out.join(format!("trace_full_{tag}.csv")), &output::trace_rows(t))?;
        }
        if cfg.verbose {
            output::write_csv(&cfg.out.join(format!("rounds_{tag}.csv")), &output::round_rows(&r.rounds))?;
            if let Some(p) = &r.problem {
                let path = cfg.out.join(format!("problem_{tag}.json"));
                std::fs::write(&path, crate::formats::write_problem(p)).with_context(|| format!("writing {}", path.display()))?;
            }
            if let Some(w) = &r.w {
                let path = cfg.out.join(format!("w_{tag}.coo"));
                let file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                crate::formats::write_coo(w, std::io::BufWriter::new(file)).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        rows.push(r.row);
    }
    let path = cfg.out.join("solver_compare.csv");
    output::write_csv(&path, &rows)?;

    let pass = rows.iter().all(|r| r.ok() && r.partitioned_cheaper());
    let mut s = String::new();
    writeln!(s, "solver-compare: {} grid points -> {}", rows.len(), path.display())?;
    writeln!(s, "  {:>3} {:>3} {:>9} {:>11} {:>4} {:>4} {:>9} {:>9} {:>7}  status", "n", "k", "chi_W", "chi_full", "K_W", "K_f", "applies_W", "applies_f", "ratio")?;
    let opt = |v: Option<u64>| v.map_or("-".to_string(), |a| a.to_string());
    for r in &rows {
        writeln!(
            s,
            "  {:>3} {:>3} {:>9.3} {:>11.3} {:>4} {:>4} {:>9} {:>9} {:>7}  {}",
            r.n,
            r.k,
            r.chi_w.unwrap_or(f64::NAN),
            r.chi_full.unwrap_or(f64::NAN),
            r.degree_w.map_or("-".into(), |d| d.to_string()),
            r.degree_full.map_or("-".into(), |d| d.to_string()),
            opt(r.applies_w),
            opt(r.applies_full),
            r.applies_ratio.map_or("-".into(), |v| format!("{v:.3}")),
            r.status
        )?;
    }
    for (n, sw, sf) in comm_slopes(&rows) {
        let f = |v: Option<f64>| v.map_or("-".into(), |v| format!("{v:.3}"));
        writeln!(s, "  n={n}: slope of log(applies) vs log(k): partitioned {}, full-vector {}", f(sw), f(sf))?;
    }
    writeln!(s, "  partitioned strictly cheaper everywhere: {}", if pass { "PASS" } else { "FAIL" })?;
    Ok(Outcome { pass, summary: s })
}

// --- example-2-2 ----------------------------------------------------------

#[derive(Debug, Clone)]
pub struct Example22 {
    pub w: DenseSymMatrix,
    pub l: DenseSymMatrix,
    pub chi_w: f64,
    pub chi_l: f64,
    pub matches_display: bool,
    /// `‖W x‖∞` for a vector agreeing on every shared variable.
    pub consensus_residual: f64,
    /// `‖W x‖∞` after breaking agreement on variable 0.
    pub broken_residual: f64,
    pub cost: CommCost,
}

/// Dense-layout `W` of the three-node example, row by row.
pub const EXAMPLE_W: [[f64; 6]; 6] = [
    [1.0, 0.0, -1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0, 0.0, -1.0],
    [-1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0, 0.0, 0.0, 1.0],
];

impl Example22 {
    pub fn pass(&self) -> bool {
        (self.chi_w - 1.0).abs() <= 1e-12
            && (self.chi_l - 3.0).abs() <= 1e-12
            && self.matches_display
            && self.consensus_residual == 0.0
            && self.broken_residual > 0.0
    }
}

pub fn example_2_2() -> partopt_core::Result<Example22> {
    let (g, part) = fixtures::example_2_2();
    let w = CommMatrix::from_partition(&g, &part)?;
    let dense = w.dense();
    let matches_display = (0..6).all(|r| (0..6).all(|c| dense.get(r, c) == EXAMPLE_W[r][c]));
    let chi_w = w.condition_number()?;
    let l = g.laplacian();
    let (max, min) = partopt_core::comm::positive_extremes(&l.eigenvalues()?).expect("connected graph");
    // node 0 stores (x⁰, x¹), node 1 stores x⁰, node 2 stores x¹
    let agree = StackedVector::compact(vec![1.5, -2.0, 1.5, -2.0]);
    let broken = StackedVector::compact(vec![1.5, -2.0, 0.5, -2.0]);
    Ok(Example22 {
        chi_w,
        chi_l: max / min,
        matches_display,
        consensus_residual: w.consensus_residual(&agree)?,
        broken_residual: w.consensus_residual(&broken)?,
        cost: solver::communication_cost_per_round(&g, &w)?,
        w: dense,
        l,
    })
}

fn matrix_text(m: &DenseSymMatrix) -> String {
    let mut s = String::new();
    for r in 0..m.order() {
        s.push_str("   ");
        for c in 0..m.order() {
            let _ = write!(s, " {:>3}", m.get(r, c));
        }
        s.push('\n');
    }
    s
}

pub fn cmd_example_2_2() -> Outcome {
    let ex = match example_2_2() {
        Ok(ex) => ex,
        Err(e) => return Outcome { pass: false, summary: format!("example-2-2: {e}\n") },
    };
    let mut s = String::new();
    let _ = writeln!(s, "example-2-2: star 1-0-2, node 0 uses x0 and x1, node 1 uses x0, node 2 uses x1");
    let _ = write!(s, "  W (node-major, variables inner):\n{}", matrix_text(&ex.w));
    let _ = write!(s, "  L(G):\n{}", matrix_text(&ex.l));
    let _ = writeln!(s, "  chi(W) = {:.3}", ex.chi_w);
    let _ = writeln!(s, "  chi(L) = {:.3}", ex.chi_l);
    let _ = writeln!(s, "  W matches the reference matrix: {}", ex.matches_display);
    let _ = writeln!(s, "  |W x|_inf with agreeing copies (x0 = 1.5, x1 = -2): {:e}", ex.consensus_residual);
    let _ = writeln!(s, "  |W x|_inf with node 1 holding x0 = 0.5:            {}", ex.broken_residual);
    let _ = writeln!(
        s,
        "  scalars per round: partitioned {}, full vector {}, ratio {}",
        ex.cost.partitioned, ex.cost.full_vector, ex.cost.ratio
    );
    let _ = writeln!(s, "  {}", if ex.pass() { "PASS" } else { "FAIL" });
    Outcome { pass: ex.pass(), summary: s }
}
