//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

use std::process::ExitCode;
use std::time::{Duration, Instant};

use partopt::config::{Experiment, ExperimentConfig};
use partopt::experiments::{self, comm_slopes, compare_point, theorem1_slopes};
use partopt::fixtures;
use partopt_core::graph::{self, RingCliqueParams};
use partopt_core::solver::{self, generate_problem, normal_equations, Chebyshev, DualFunction, SolverConfig};
use partopt_core::spectra;
use partopt_core::spectrum::{max_abs_deviation, unique_sets_match, unique_within};
use partopt_core::{simnet, CommMatrix, StackedVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Check = Result<String, String>;

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn example_exactness() -> Check {
    let ex = experiments::example_2_2().map_err(err)?;
    ensure(ex.matches_display, || "W differs from the reference matrix".into())?;
    ensure((ex.chi_w - 1.0).abs() <= 1e-12, || format!("chi(W) = {:e}", ex.chi_w))?;
    ensure((ex.chi_l - 3.0).abs() <= 1e-12, || format!("chi(L) = {:e}", ex.chi_l))?;
    ensure(ex.pass(), || "consensus residual check failed".into())?;
    Ok(format!("chi(W) = {}, chi(L) = {}", ex.chi_w, ex.chi_l))
}

fn crown_oracle() -> Check {
    let mut worst = 0.0f64;
    for k in 2..=64 {
        let report = spectra::crown_spectrum(k).map_err(err)?;
        let numeric = graph::crown(k).and_then(|g| g.laplacian_spectrum()).map_err(err)?;
        let dev = max_abs_deviation(&numeric, &report.multiset()).ok_or("cardinality mismatch")?;
        ensure(dev <= 1e-8, || format!("k = {k}: deviation {dev:e}"))?;
        ensure(report.chi == (k + 2) as f64, || format!("k = {k}: closed-form chi {}", report.chi))?;
        let (max, min) = partopt_core::comm::positive_extremes(&numeric).ok_or("no positive eigenvalue")?;
        ensure((max / min - (k + 2) as f64).abs() <= 1e-8, || format!("k = {k}: numeric chi {}", max / min))?;
        worst = worst.max(dev);
    }
    Ok(format!("k = 2..64, max deviation {worst:.2e}"))
}

fn ring_oracle() -> Check {
    let mut worst = 0.0f64;
    for n in 3..=10 {
        for k in 2..=8 {
            let params = RingCliqueParams::new(n, k).map_err(err)?;
            let report = spectra::ring_clique_spectrum(params).map_err(err)?;
            let numeric = graph::ring_of_cliques(params).and_then(|g| g.laplacian_spectrum()).map_err(err)?;
            let dev = max_abs_deviation(&numeric, &report.multiset()).ok_or("cardinality mismatch")?;
            ensure(dev <= 1e-8, || format!("(n, k) = ({n}, {k}): deviation {dev:e}"))?;
            worst = worst.max(dev);
        }
    }
    Ok(format!("56 grid points, max deviation {worst:.2e}"))
}

fn taylor_law() -> Check {
    let k = 4;
    let mut errs = Vec::new();
    for n in [32usize, 64, 128, 256] {
        let r = spectra::ring_clique_spectrum(RingCliqueParams::new(n, k).map_err(err)?).map_err(err)?;
        errs.push((r.lambda_min_pos / spectra::lambda_min_taylor(n, k) - 1.0).abs());
    }
    // closed form against the eigensolver at the smallest size
    let params = RingCliqueParams::new(32, k).map_err(err)?;
    let numeric = graph::ring_of_cliques(params).and_then(|g| g.laplacian_spectrum()).map_err(err)?;
    let (_, min) = partopt_core::comm::positive_extremes(&numeric).ok_or("no positive eigenvalue")?;
    let closed = spectra::ring_clique_spectrum(params).map_err(err)?.lambda_min_pos;
    ensure((min - closed).abs() <= 1e-10, || format!("n = 32: numeric {min:e} vs closed form {closed:e}"))?;
    ensure(errs.windows(2).all(|w| w[1] < w[0]), || format!("errors not decreasing: {}", fmt_list(&errs)))?;
    ensure(errs[3] < 0.02, || format!("error {:.3e} at n = 256", errs[3]))?;
    Ok(format!("relative errors {}", fmt_list(&errs)))
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(", ")
}

fn asymptotics() -> Check {
    let (ns, ks) = ([8usize, 16, 32, 64], [4usize, 8, 16, 32]);
    let table = spectra::theorem1_check(&spectra::grid(&ns, &ks).map_err(err)?).map_err(err)?;
    let (wa, wb) = table.chi_w_ratio_range();
    let (la, lb) = table.chi_l_ratio_range();
    ensure(wb / wa <= 3.0, || format!("chi_W/k spread {:.3}", wb / wa))?;
    ensure(lb / la <= 3.0, || format!("chi_L/(n^2 k^2) spread {:.3}", lb / la))?;
    let s = theorem1_slopes(&table, &ns, &ks);
    let in_band = |v: f64, c: f64, t: f64| (v - c).abs() <= t;
    for &(k, v) in &s.chi_l_vs_n {
        ensure(in_band(v, 2.0, 0.1), || format!("chi_L vs n at k = {k}: slope {v:.3}"))?;
    }
    for &(n, v) in &s.chi_l_vs_k {
        ensure(in_band(v, 2.0, 0.2), || format!("chi_L vs k at n = {n}: slope {v:.3}"))?;
    }
    let w = s.chi_w_vs_k.ok_or("no chi_W slope")?;
    ensure(in_band(w, 1.0, 0.1), || format!("chi_W vs k: slope {w:.3}"))?;
    ensure(s.chi_l_vs_n.len() == ks.len() && s.chi_l_vs_k.len() == ns.len(), || "missing slopes".into())?;
    let range = |v: &[(usize, f64)]| {
        let it = v.iter().map(|p| p.1);
        (it.clone().fold(f64::INFINITY, f64::min), it.fold(f64::NEG_INFINITY, f64::max))
    };
    let (a, b) = range(&s.chi_l_vs_n);
    let (c, d) = range(&s.chi_l_vs_k);
    Ok(format!(
        "spreads {:.2}/{:.2}; slopes chi_L~n [{a:.3}, {b:.3}], chi_L~k [{c:.3}, {d:.3}], chi_W~k {w:.3}",
        wb / wa,
        lb / la
    ))
}

fn block_spectra() -> Check {
    for seed in 0..100u64 {
        let (g, part) = fixtures::random_instance(seed, 12, 5);
        let w = CommMatrix::from_partition(&g, &part).map_err(err)?;
        let dense = w.dense().eigenvalues().map_err(err)?;
        let blocks = w.spectrum(1e-9).map_err(err)?;
        ensure(unique_sets_match(&unique_within(&dense, 1e-8), &blocks.unique, 1e-8), || {
            format!("seed {seed}: unique spectra differ")
        })?;

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..part.num_vars()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let consensus: Vec<f64> =
            (0..w.num_nodes()).flat_map(|i| w.node_entry_vars(i).map(|l| values[l]).collect::<Vec<_>>()).collect();
        ensure(w.is_consensus(&StackedVector::compact(consensus.clone()), 1e-12).map_err(err)?, || {
            format!("seed {seed}: consensus vector outside the kernel")
        })?;
        let random: Vec<f64> = (0..w.compact_len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let in_kernel = w.is_consensus(&StackedVector::compact(random.clone()), 1e-9).map_err(err)?;
        let agrees = w.blocks().iter().all(|b| {
            let first = b.members().first().map(|&i| random[b.compact_index(i, 0).unwrap()]);
            b.members().iter().all(|&i| Some(random[b.compact_index(i, 0).unwrap()]) == first)
        });
        ensure(in_kernel == agrees, || format!("seed {seed}: kernel membership disagrees with consensus"))?;
        if let Some(b) = w.blocks().iter().find(|b| b.members().len() > 1) {
            let mut broken = consensus;
            broken[b.compact_index(b.members()[0], 0).unwrap()] += 0.5;
            ensure(!w.is_consensus(&StackedVector::compact(broken), 1e-6).map_err(err)?, || {
                format!("seed {seed}: broken consensus inside the kernel")
            })?;
        }
    }
    Ok("100 instances".into())
}

/// Gaussian elimination with partial pivoting, kept apart from the solver's
/// Cholesky so the reference is independent of it.
fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for j in c..n {
                a[r][j] -= f * a[c][j];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|j| a[r][j] * x[j]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

fn solver_correctness() -> Check {
    let (_, part, w) = fixtures::ring_clique_instance(4, 4).map_err(err)?;
    let mut worst_ratio = 0.0f64;
    let mut worst_fd = 0.0f64;
    for seed in 0..20u64 {
        let p = generate_problem(&part, 2, seed, 1.0).map_err(err)?;
        let ne = normal_equations(&p);
        let s = ne.hessian.order();
        let rows = (0..s).map(|r| (0..s).map(|c| ne.hessian.get(r, c)).collect()).collect();
        let x_star = p.stack(&gauss_solve(rows, ne.rhs.clone())).map_err(err)?;
        let norm = x_star.iter().map(|v| v * v).sum::<f64>().sqrt();
        let out = solver::solve(&p, &w, &SolverConfig { seed, ..SolverConfig::default() }).map_err(err)?;
        let dist = out.x.iter().zip(&x_star).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let target = 1e-6 * (1.0 + norm);
        ensure(dist <= target, || format!("seed {seed}: distance {dist:e} above {target:e}"))?;
        worst_ratio = worst_ratio.max(dist / target);

        for cheb in [Chebyshev::Off, Chebyshev::Auto] {
            let phi = DualFunction::new(&p, &w, cheb).map_err(err)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let y: Vec<f64> = (0..w.compact_len()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let grad = phi.gradient(&y).map_err(err)?;
            let h = 1e-5;
            let mut diff = 0.0;
            for c in 0..y.len() {
                let (mut yp, mut ym) = (y.clone(), y.clone());
                yp[c] += h;
                ym[c] -= h;
                let fd = (phi.value(&yp).map_err(err)? - phi.value(&ym).map_err(err)?) / (2.0 * h);
                diff += (fd - grad[c]).powi(2);
            }
            let rel = diff.sqrt() / grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            ensure(rel <= 1e-5, || format!("seed {seed}: finite-difference error {rel:e}"))?;
            worst_fd = worst_fd.max(rel);
        }
    }
    Ok(format!("20 seeds, worst distance/target {worst_ratio:.3}, worst gradient error {worst_fd:.2e}"))
}

fn communication_advantage() -> Check {
    let mut cfg = ExperimentConfig::new(Experiment::SolverCompare);
    cfg.n_list = vec![3, 4];
    cfg.k_list = vec![4, 8];
    cfg.cheb = Chebyshev::Auto;
    let points: Vec<(usize, usize)> = cfg.n_list.iter().flat_map(|&n| cfg.k_list.iter().map(move |&k| (n, k))).collect();
    let rows: Vec<_> = points.par_iter().map(|&(n, k)| compare_point(n, k, &cfg).row).collect();
    let mut detail = Vec::new();
    let mut failures = Vec::new();
    for r in &rows {
        if !r.ok() {
            failures.push(format!("(n, k) = ({}, {}): {}", r.n, r.k, r.status));
        } else if !r.partitioned_cheaper() {
            failures.push(format!("(n, k) = ({}, {}): {:?} vs {:?} applications", r.n, r.k, r.applies_w, r.applies_full));
        }
        detail.push(format!("({},{}) {}/{}", r.n, r.k, r.applies_w.unwrap_or(0), r.applies_full.unwrap_or(0)));
    }
    for (n, sw, sf) in comm_slopes(&rows) {
        let (sw, sf) = (sw.unwrap_or(f64::NAN), sf.unwrap_or(f64::NAN));
        detail.push(format!("n={n} slopes {sw:.3}/{sf:.3}"));
        if !((sw - 0.5).abs() <= 0.2) {
            failures.push(format!("n = {n}: partitioned slope {sw:.3} outside 0.5 +- 0.2"));
        }
        if !(sf >= 0.9) {
            failures.push(format!("n = {n}: full-vector slope {sf:.3} below 0.9"));
        }
    }
    let summary = format!("W/full applications {}", detail.join(", "));
    if failures.is_empty() { Ok(summary) } else { Err(format!("{}; {summary}", failures.join("; "))) }
}

fn simulation_equivalence() -> Check {
    let (g, part) = fixtures::example_2_2();
    let mut ws = vec![CommMatrix::from_partition(&g, &part).map_err(err)?];
    for (n, k) in [(3, 4), (3, 8), (4, 4), (4, 8), (5, 3)] {
        ws.push(fixtures::ring_clique_instance(n, k).map_err(err)?.2);
    }
    for seed in 0..30 {
        let (g, part) = fixtures::random_instance(seed, 12, 5);
        ws.push(CommMatrix::from_partition(&g, &part).map_err(err)?);
    }
    let mut applies = 0;
    for (f, w) in ws.iter().enumerate() {
        let expected: u64 = w.blocks().iter().map(|b| 2 * (b.num_edges() * b.dim()) as u64).sum();
        let mut rng = ChaCha8Rng::seed_from_u64(f as u64);
        for _ in 0..5 {
            let x: Vec<f64> = (0..w.compact_len()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let (sim, log) = simnet::simulate_w_apply(w, &x).map_err(err)?;
            let mat = w.apply(&StackedVector::compact(x)).map_err(err)?;
            ensure(sim.iter().zip(mat.values()).all(|(a, b)| a.to_bits() == b.to_bits()) && sim.len() == mat.values().len(), || {
                format!("fixture {f}: simulated apply differs from the matrix apply")
            })?;
            ensure(log.scalars == expected, || format!("fixture {f}: {} scalars, expected {expected}", log.scalars))?;
            applies += 1;
        }
    }
    Ok(format!("{} fixtures, {applies} applications bit-identical", ws.len()))
}

fn semi_crown_oracle() -> Check {
    let mut worst = 0.0f64;
    for k in 3..=32 {
        let report = spectra::semi_crown_spectrum(k).map_err(err)?;
        let numeric = graph::semi_crown(k).and_then(|g| g.laplacian_spectrum()).map_err(err)?;
        let dev = max_abs_deviation(&numeric, &report.multiset()).ok_or("cardinality mismatch")?;
        ensure(dev <= 1e-8, || format!("k = {k}: deviation {dev:e}"))?;
        worst = worst.max(dev);
    }
    Ok(format!("k = 3..32, max deviation {worst:.2e}"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "three-node example exactness", budget: Duration::from_secs(1), run: example_exactness },
        Criterion { id: 2, name: "crown oracle", budget: Duration::from_secs(10), run: crown_oracle },
        Criterion { id: 3, name: "ring-of-cliques oracle", budget: Duration::from_secs(30), run: ring_oracle },
        Criterion { id: 4, name: "smallest positive eigenvalue law", budget: Duration::from_secs(5), run: taylor_law },
        Criterion { id: 5, name: "condition number asymptotics", budget: Duration::from_secs(10), run: asymptotics },
        Criterion { id: 6, name: "block spectrum and kernel", budget: Duration::from_secs(60), run: block_spectra },
        Criterion { id: 7, name: "solver correctness", budget: Duration::from_secs(120), run: solver_correctness },
        Criterion { id: 8, name: "communication advantage", budget: Duration::from_secs(600), run: communication_advantage },
        Criterion { id: 9, name: "simulation equivalence", budget: Duration::from_secs(30), run: simulation_equivalence },
        Criterion { id: 10, name: "semi-crown oracle", budget: Duration::from_secs(5), run: semi_crown_oracle },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(s) if elapsed > c.budget => Err(format!("{s}; took {elapsed:.2?}, budget {:?}", c.budget)),
            other => other,
        };
        let (tag, text) = match &result {
            Ok(s) => ("PASS", s),
            Err(s) => ("FAIL", s),
        };
        if result.is_err() {
            failed += 1;
        }
        println!("[{tag}] {:>2} {:<34} {:>9.2?}  {text}", c.id, c.name, elapsed);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
