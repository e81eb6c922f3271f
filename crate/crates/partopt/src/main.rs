use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, ValueEnum};
use partopt::config::{parse_cheb, FileConfig};
use partopt::experiments;
use partopt::{Experiment, ExperimentConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Verb {
    Theorem1,
    SpectraVerify,
    SolverCompare,
    #[value(name = "example-2-2")]
    Example22,
}

/// Partitioned communication matrices: spectra, condition numbers and
/// decentralized solver comparisons.
#[derive(Debug, Parser)]
#[command(name = "partopt", version)]
struct Cli {
    verb: Verb,
    /// Ring lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    /// Clique sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    k_list: Option<Vec<usize>>,
    /// Per-copy regularization weight.
    #[arg(long)]
    mu: Option<f64>,
    /// Solver termination tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for CSV files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Chebyshev acceleration of the dual solver.
    #[arg(long, value_parser = ["off", "auto"])]
    cheb: Option<String>,
    /// Rows of A_i per node for generated problems.
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Also dump round logs, problems and W in coordinate format.
    #[arg(long)]
    verbose: bool,
    /// TOML file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn build_config(cli: Cli) -> anyhow::Result<ExperimentConfig> {
    let experiment = match cli.verb {
        Verb::Theorem1 => Experiment::Theorem1,
        Verb::SpectraVerify => Experiment::SpectraVerify,
        Verb::SolverCompare => Experiment::SolverCompare,
        Verb::Example22 => Experiment::Example22,
    };
    let mut cfg = ExperimentConfig::new(experiment);
    if let Some(path) = &cli.config {
        FileConfig::load(path)?.apply(&mut cfg)?;
    }
    if let Some(v) = cli.n_list {
        cfg.n_list = v;
        cfg.custom_grid = true;
    }
    if let Some(v) = cli.k_list {
        cfg.k_list = v;
        cfg.custom_grid = true;
    }
    if let Some(v) = cli.cheb {
        cfg.cheb = parse_cheb(&v)?;
    }
    cfg.mu = cli.mu.unwrap_or(cfg.mu);
    cfg.tol = cli.tol.unwrap_or(cfg.tol);
    cfg.seed = cli.seed.unwrap_or(cfg.seed);
    cfg.out = cli.out.unwrap_or(cfg.out);
    cfg.rows = cli.rows.unwrap_or(cfg.rows);
    cfg.max_iters = cli.max_iters.unwrap_or(cfg.max_iters);
    cfg.verbose |= cli.verbose;
    Ok(cfg)
}

fn threads() -> anyhow::Result<usize> {
    match std::env::var("PARTOPT_THREADS") {
        Ok(v) => v.trim().parse().with_context(|| format!("PARTOPT_THREADS must be an integer, got '{v}'")),
        Err(_) => Ok(0),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| {
        let cfg = build_config(cli)?;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads()?).build()?;
        pool.install(|| experiments::run(&cfg))
    })();
    match result {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
