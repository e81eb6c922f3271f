//! Experiment configuration from a TOML file with command-line overrides.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use partopt_core::solver::Chebyshev;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Theorem1,
    SpectraVerify,
    SolverCompare,
    Example22,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Theorem1 => "theorem1",
            Experiment::SpectraVerify => "spectra-verify",
            Experiment::SolverCompare => "solver-compare",
            Experiment::Example22 => "example-2-2",
        }
    }

    fn default_grid(self) -> (Vec<usize>, Vec<usize>) {
        match self {
            Experiment::Theorem1 => (vec![8, 16, 32, 64], vec![4, 8, 16, 32]),
            Experiment::SpectraVerify => ((3..=10).collect(), (2..=8).collect()),
            Experiment::SolverCompare => (vec![3, 4], vec![4, 8]),
            Experiment::Example22 => (vec![], vec![]),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_list: Vec<usize>,
    pub k_list: Vec<usize>,
    /// Whether the grid came from the user rather than the defaults.
    pub custom_grid: bool,
    pub mu: f64,
    pub tol: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub cheb: Chebyshev,
    pub rows: usize,
    pub max_iters: usize,
    pub verbose: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        let (n_list, k_list) = experiment.default_grid();
        Self {
            experiment,
            n_list,
            k_list,
            custom_grid: false,
            mu: 1.0,
            tol: 1e-8,
            seed: 0,
            out: PathBuf::from("out"),
            cheb: Chebyshev::Auto,
            rows: 2,
            max_iters: 200_000,
            verbose: false,
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.experiment != Experiment::Example22 && (self.n_list.is_empty() || self.k_list.is_empty()) {
            bail!("parameter grid is empty");
        }
        if let Some(n) = self.n_list.iter().find(|&&n| n < 3) {
            bail!("ring length must be >= 3, got {n}");
        }
        if let Some(k) = self.k_list.iter().find(|&&k| k < 2) {
            bail!("clique size must be >= 2, got {k}");
        }
        if !(self.mu > 0.0) {
            bail!("mu must be > 0, got {}", self.mu);
        }
        if !(self.tol > 0.0) {
            bail!("tol must be > 0, got {}", self.tol);
        }
        if self.rows == 0 {
            bail!("rows must be >= 1");
        }
        Ok(())
    }
}

/// Keys accepted in a config file; all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub n_list: Option<Vec<usize>>,
    pub k_list: Option<Vec<usize>>,
    pub mu: Option<f64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub cheb: Option<String>,
    pub rows: Option<usize>,
    pub max_iters: Option<usize>,
    pub verbose: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Applies the file on top of `cfg`.
    pub fn apply(self, cfg: &mut ExperimentConfig) -> anyhow::Result<()> {
        if let Some(v) = self.n_list {
            cfg.n_list = v;
            cfg.custom_grid = true;
        }
        if let Some(v) = self.k_list {
            cfg.k_list = v;
            cfg.custom_grid = true;
        }
        if let Some(v) = self.cheb {
            cfg.cheb = parse_cheb(&v)?;
        }
        cfg.mu = self.mu.unwrap_or(cfg.mu);
        cfg.tol = self.tol.unwrap_or(cfg.tol);
        cfg.seed = self.seed.unwrap_or(cfg.seed);
        cfg.out = self.out.unwrap_or(cfg.out.clone());
        cfg.rows = self.rows.unwrap_or(cfg.rows);
        cfg.max_iters = self.max_iters.unwrap_or(cfg.max_iters);
        cfg.verbose = self.verbose.unwrap_or(cfg.verbose);
        Ok(())
    }
}

pub fn parse_cheb(s: &str) -> anyhow::Result<Chebyshev> {
    match s {
        "off" => Ok(Chebyshev::Off),
        "auto" => Ok(Chebyshev::Auto),
        other => bail!("cheb must be 'off' or 'auto', got '{other}'"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_defaults() {
        let file: FileConfig = toml::from_str("n-list = [3]\nmu = 2.0\ncheb = \"off\"").unwrap();
        let mut cfg = ExperimentConfig::new(Experiment::SolverCompare);
        file.apply(&mut cfg).unwrap();
        assert_eq!(cfg.n_list, vec![3]);
        assert_eq!(cfg.k_list, vec![4, 8]);
        assert_eq!((cfg.mu, cfg.cheb, cfg.custom_grid), (2.0, Chebyshev::Off, true));
        assert!(toml::from_str::<FileConfig>("bogus = 1").is_err());
        assert!(parse_cheb("on").is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = ExperimentConfig::new(Experiment::Theorem1);
        assert!(cfg.validate().is_ok());
        cfg.k_list.clear();
        assert!(cfg.validate().is_err());
        cfg.k_list = vec![1, 4];
        assert!(cfg.validate().is_err());
        cfg.k_list = vec![4];
        cfg.n_list = vec![2];
        assert!(cfg.validate().is_err());
        assert!(ExperimentConfig::new(Experiment::Example22).validate().is_ok());
    }
}
