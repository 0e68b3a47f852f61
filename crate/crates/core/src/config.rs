//! Run configuration files.
//!
//! A TOML file with the [`RunConfig`] fields, every one optional:
//!
//! ```toml
//! problem = "sod"          # or an inline [problem] table
//! method = "cch"
//! cch_solver = "quadratic"
//! n_cells = 200
//! cfl = 0.3
//! output = "out"
//! snapshot_times = [0.1]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::closure::SolverOrder;
use crate::driver::{Method, RunConfig};
use crate::error::{HydroError, Result};
use crate::problems::ProblemSpec;
use crate::sgh::SghMode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProblemChoice {
    Named(String),
    Inline(Box<ProblemSpec>),
}

impl ProblemChoice {
    pub fn resolve(&self) -> Result<ProblemSpec> {
        match self {
            ProblemChoice::Named(name) => ProblemSpec::named(name),
            ProblemChoice::Inline(spec) => Ok((**spec).clone()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub problem: Option<ProblemChoice>,
    pub method: Option<Method>,
    pub sgh_mode: Option<SghMode>,
    pub cch_solver: Option<SolverOrder>,
    pub n_cells: Option<usize>,
    pub cfl: Option<f64>,
    pub dt_init: Option<f64>,
    pub dt_max: Option<f64>,
    pub dt_growth: Option<f64>,
    pub t_end: Option<f64>,
    pub output: Option<PathBuf>,
    pub snapshot_times: Option<Vec<f64>>,
    pub max_steps: Option<usize>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HydroError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HydroError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| e.context(path.display().to_string()))
    }

    /// Fields set in `other` replace those in `self`.
    pub fn merge(self, other: FileConfig) -> FileConfig {
        FileConfig {
            problem: other.problem.or(self.problem),
            method: other.method.or(self.method),
            sgh_mode: other.sgh_mode.or(self.sgh_mode),
            cch_solver: other.cch_solver.or(self.cch_solver),
            n_cells: other.n_cells.or(self.n_cells),
            cfl: other.cfl.or(self.cfl),
            dt_init: other.dt_init.or(self.dt_init),
            dt_max: other.dt_max.or(self.dt_max),
            dt_growth: other.dt_growth.or(self.dt_growth),
            t_end: other.t_end.or(self.t_end),
            output: other.output.or(self.output),
            snapshot_times: other.snapshot_times.or(self.snapshot_times),
            max_steps: other.max_steps.or(self.max_steps),
        }
    }

    /// Builds a validated run configuration; `problem` is required and the
    /// rest fall back to defaults (100 cells, staggered scheme).
    pub fn into_run_config(self) -> Result<RunConfig> {
        let problem = self
            .problem
            .as_ref()
            .ok_or_else(|| HydroError::Config("no problem given".into()))?
            .resolve()?;
        let mut cfg = RunConfig::new(problem, self.method.unwrap_or_default(), self.n_cells.unwrap_or(100));
        if let Some(m) = self.sgh_mode {
            cfg.sgh_mode = m;
        }
        if let Some(s) = self.cch_solver {
            cfg.cch_solver = s;
        }
        if let Some(v) = self.cfl {
            cfg.time.cfl = v;
        }
        cfg.time.dt_init = self.dt_init;
        if let Some(v) = self.dt_max {
            cfg.time.dt_max = v;
        }
        if let Some(v) = self.dt_growth {
            cfg.time.dt_growth = v;
        }
        cfg.t_end = self.t_end;
        if let Some(s) = self.snapshot_times {
            cfg.snapshot_times = s;
        }
        if let Some(m) = self.max_steps {
            cfg.max_steps = m;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_problem() {
        let fc = FileConfig::parse("problem = \"lax\"\nmethod = \"cch\"\nn_cells = 64\ncch_solver = \"acoustic\"\n").unwrap();
        let cfg = fc.into_run_config().unwrap();
        assert_eq!(cfg.problem, ProblemSpec::lax());
        assert_eq!(cfg.method, Method::Cch);
        assert_eq!(cfg.n_cells, 64);
        assert_eq!(cfg.cch_solver, SolverOrder::Acoustic);
    }

    #[test]
    fn inline_problem() {
        let spec = ProblemSpec { name: "custom".into(), t_end: 0.1, ..ProblemSpec::sod() };
        let file = FileConfig {
            problem: Some(ProblemChoice::Inline(Box::new(spec.clone()))),
            n_cells: Some(10),
            ..Default::default()
        };
        let text = toml::to_string(&file).unwrap();
        let cfg = FileConfig::parse(&text).unwrap().into_run_config().unwrap();
        assert_eq!(cfg.problem, spec);
    }

    #[test]
    fn flags_override_file() {
        let file = FileConfig::parse("problem = \"sod\"\ncfl = 0.5\nn_cells = 10").unwrap();
        let flags = FileConfig { cfl: Some(0.2), ..Default::default() };
        let cfg = file.merge(flags).into_run_config().unwrap();
        assert_eq!(cfg.time.cfl, 0.2);
        assert_eq!(cfg.n_cells, 10);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(FileConfig::parse("cells = 3"), Err(HydroError::Config(_))));
        assert!(FileConfig::parse("problem = \"sod\"\ncfl = 2.0").unwrap().into_run_config().is_err());
        assert!(FileConfig::default().into_run_config().is_err());
        assert!(FileConfig::parse("problem = \"nope\"").unwrap().into_run_config().is_err());
    }
}
