//! Time-step control, the run loop and mesh-convergence studies.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::Boundaries;
use crate::cch::{self, CchStepReport};
use crate::closure::SolverOrder;
use crate::diagnostics::{l1_error, convergence_order, ConservationLedger, EntropyMonitor, Totals};
use crate::eos::IdealGas;
use crate::error::{HydroError, Result};
use crate::mesh::{CchState, Mesh1D, SghState};
use crate::output::{nodes_csv, write_text, Profile, Summary};
use crate::problems::ProblemSpec;
use crate::sgh::{self, SghMode, SghStepReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Sgh,
    Cch,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Sgh => "sgh",
            Method::Cch => "cch",
        })
    }
}

impl FromStr for Method {
    type Err = HydroError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sgh" => Ok(Method::Sgh),
            "cch" => Ok(Method::Cch),
            _ => Err(HydroError::Config(format!("unknown method '{s}' (expected sgh or cch)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeControl {
    pub cfl: f64,
    /// First step; defaults to `1e-4` of the first CFL bound.
    pub dt_init: Option<f64>,
    pub dt_max: f64,
    pub dt_growth: f64,
}

impl Default for TimeControl {
    fn default() -> Self {
        Self { cfl: 0.3, dt_init: None, dt_max: f64::INFINITY, dt_growth: 1.01 }
    }
}

impl TimeControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 0.9) {
            return Err(HydroError::Config(format!("cfl must lie in (0, 0.9], got {}", self.cfl)));
        }
        if !(self.dt_growth >= 1.0) {
            return Err(HydroError::Config(format!("dt_growth must be >= 1, got {}", self.dt_growth)));
        }
        if !(self.dt_max > 0.0) {
            return Err(HydroError::Config(format!("dt_max must be positive, got {}", self.dt_max)));
        }
        if let Some(dt) = self.dt_init {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(HydroError::Config(format!("dt_init must be positive, got {dt}")));
            }
        }
        Ok(())
    }
}

/// `min_j V_j / (c_j + |du_j|)`, infinite when every denominator vanishes.
pub fn cfl_candidate(volumes: &[f64], c: &[f64], du: &[f64]) -> f64 {
    volumes
        .iter()
        .zip(c)
        .zip(du)
        .map(|((v, c), d)| v / (c + d.abs()))
        .fold(f64::INFINITY, f64::min)
}

/// `min(cfl * candidate, growth * dt_prev, dt_max, remaining)`.
pub fn compute_dt(candidate: f64, control: &TimeControl, dt_prev: Option<f64>, remaining: f64) -> Result<f64> {
    let mut dt = (control.cfl * candidate).min(control.dt_max).min(remaining);
    if let Some(prev) = dt_prev {
        dt = dt.min(control.dt_growth * prev);
    }
    if !(dt > 0.0) {
        return Err(HydroError::TimeStepCollapse { step: 0, time: f64::NAN, dt });
    }
    Ok(dt)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub method: Method,
    pub sgh_mode: SghMode,
    pub cch_solver: SolverOrder,
    pub n_cells: usize,
    pub time: TimeControl,
    /// Overrides the problem's end time.
    pub t_end: Option<f64>,
    pub snapshot_times: Vec<f64>,
    pub max_steps: usize,
    /// A step shorter than this fraction of the end time is a collapse.
    pub min_dt_fraction: f64,
}

impl RunConfig {
    pub fn new(problem: ProblemSpec, method: Method, n_cells: usize) -> Self {
        Self {
            problem,
            method,
            sgh_mode: SghMode::PredictorOnly,
            cch_solver: SolverOrder::Quadratic,
            n_cells,
            time: TimeControl::default(),
            t_end: None,
            snapshot_times: Vec::new(),
            max_steps: 10_000_000,
            min_dt_fraction: 1e-12,
        }
    }

    pub fn t_end(&self) -> f64 {
        self.t_end.unwrap_or(self.problem.t_end)
    }

    pub fn validate(&self) -> Result<()> {
        self.problem.validate()?;
        self.time.validate()?;
        if self.n_cells < 2 {
            return Err(HydroError::Config(format!("need at least 2 cells, got {}", self.n_cells)));
        }
        let t = self.t_end();
        if !(t >= 0.0 && t.is_finite()) {
            return Err(HydroError::Config(format!("invalid end time {t}")));
        }
        if let Some(s) = self.snapshot_times.iter().find(|s| !(**s >= 0.0 && **s <= t)) {
            return Err(HydroError::Config(format!("snapshot time {s} outside [0, {t}]")));
        }
        Ok(())
    }

    /// Base name of the output files.
    pub fn stem(&self) -> String {
        format!("{}_{}_{}", self.problem.name, self.method, self.n_cells)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    Sgh(SghState),
    Cch(CchState),
}

enum StepReport {
    Sgh(SghStepReport),
    Cch(CchStepReport),
}

/// A simulation advanced step by step.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: RunConfig,
    gas: IdealGas,
    bcs: Boundaries,
    mesh: Mesh1D,
    scheme: Scheme,
    time: f64,
    steps: usize,
    dt_prev: Option<f64>,
    dt_min: f64,
    ledger: ConservationLedger,
    entropy: EntropyMonitor,
}

impl Simulation {
    pub fn new(config: RunConfig) -> Result<Self> {
        config.validate()?;
        let gas = config.problem.gas()?;
        let (mesh, cells) = config.problem.initial_cells(config.n_cells)?;
        let scheme = match config.method {
            Method::Sgh => Scheme::Sgh(SghState::from_cells(&mesh, &gas, &cells)?),
            Method::Cch => Scheme::Cch(CchState::from_cells(&mesh, &gas, &cells)?),
        };
        let mut sim = Self {
            bcs: config.problem.boundaries(),
            config,
            gas,
            mesh,
            scheme,
            time: 0.0,
            steps: 0,
            dt_prev: None,
            dt_min: f64::INFINITY,
            ledger: ConservationLedger::new(Totals::default(), ConservationLedger::DEFAULT_TOLERANCE),
            entropy: EntropyMonitor::new(Vec::new(), EntropyMonitor::DEFAULT_TOLERANCE),
        };
        sim.ledger = ConservationLedger::new(sim.totals(), ConservationLedger::DEFAULT_TOLERANCE);
        sim.entropy = EntropyMonitor::new(sim.entropy_monitor(), EntropyMonitor::DEFAULT_TOLERANCE);
        Ok(sim)
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn ledger(&self) -> &ConservationLedger {
        &self.ledger
    }

    pub fn entropy(&self) -> &EntropyMonitor {
        &self.entropy
    }

    pub fn gas(&self) -> &IdealGas {
        &self.gas
    }

    pub fn is_finished(&self) -> bool {
        self.time >= self.config.t_end()
    }

    pub fn totals(&self) -> Totals {
        let mass = self.mesh.total_mass();
        match &self.scheme {
            Scheme::Sgh(s) => Totals {
                mass,
                momentum: sgh::total_momentum(s, &self.mesh),
                momentum_abs: self.mesh.node_mass.iter().zip(&s.node_u).map(|(m, u)| m * u.abs()).sum(),
                energy: sgh::total_energy(s, &self.mesh),
            },
            Scheme::Cch(s) => Totals {
                mass,
                momentum: cch::total_momentum(s, &self.mesh),
                momentum_abs: self.mesh.cell_mass.iter().zip(&s.u).map(|(m, u)| m * u.abs()).sum(),
                energy: cch::total_energy(s, &self.mesh),
            },
        }
    }

    pub fn profile(&self) -> Profile {
        match &self.scheme {
            Scheme::Sgh(s) => Profile::from_sgh(&self.mesh, s),
            Scheme::Cch(s) => Profile::from_cch(&self.mesh, s),
        }
    }

    /// Node velocities of a staggered run.
    pub fn node_velocities(&self) -> Option<&[f64]> {
        match &self.scheme {
            Scheme::Sgh(s) => Some(&s.node_u),
            Scheme::Cch(_) => None,
        }
    }

    fn entropy_monitor(&self) -> Vec<f64> {
        let (rho, p) = match &self.scheme {
            Scheme::Sgh(s) => (&s.rho, &s.p),
            Scheme::Cch(s) => (&s.rho, &s.p),
        };
        rho.iter().zip(p).map(|(r, p)| self.gas.entropy_monitor(*r, *p)).collect()
    }

    /// Takes one step without passing `t_stop`; returns the step size.
    pub fn step(&mut self, t_stop: f64) -> Result<f64> {
        let remaining = t_stop - self.time;
        if !(remaining > 0.0) {
            return Ok(0.0);
        }
        let step = self.steps + 1;
        let result = self.try_step(remaining, step);
        result.map_err(|e| match e {
            HydroError::TimeStepCollapse { dt, .. } => HydroError::TimeStepCollapse { step, time: self.time, dt },
            other => other.at_step(step),
        })
    }

    fn try_step(&mut self, remaining: f64, step: usize) -> Result<f64> {
        let volumes = self.mesh.cell_volumes();
        let (candidate, nodal) = match &self.scheme {
            Scheme::Sgh(s) => {
                let du: Vec<f64> = s.node_u.windows(2).map(|w| w[1] - w[0]).collect();
                (cfl_candidate(&volumes, &s.c, &du), None)
            }
            Scheme::Cch(s) => {
                let nodal = cch::solve_all_nodes(s, &self.gas, &self.bcs, self.config.cch_solver)?;
                let du = cch::nodal_velocity_jumps(&nodal);
                (cfl_candidate(&volumes, &s.c, &du), Some(nodal))
            }
        };
        let control = &self.config.time;
        let mut dt_free = compute_dt(candidate, control, self.dt_prev, f64::INFINITY)?;
        if self.dt_prev.is_none() {
            dt_free = dt_free.min(control.dt_init.unwrap_or(1e-4 * control.cfl * candidate));
        }
        let dt = dt_free.min(remaining);
        let floor = self.config.min_dt_fraction * self.config.t_end();
        if (dt < floor && dt < remaining) || step > self.config.max_steps {
            return Err(HydroError::TimeStepCollapse { step, time: self.time, dt });
        }

        let report = match (&mut self.scheme, nodal) {
            (Scheme::Sgh(s), _) => StepReport::Sgh(sgh::step(
                s,
                &mut self.mesh,
                &self.gas,
                dt,
                &self.bcs,
                self.config.sgh_mode,
            )?),
            (Scheme::Cch(s), Some(nodal)) => StepReport::Cch(cch::step_with_nodes(s, &mut self.mesh, &self.gas, dt, nodal)?),
            (Scheme::Cch(_), None) => unreachable!("nodal solutions are computed for every cell-centered step"),
        };

        self.steps = step;
        self.time = if dt == remaining { self.time + remaining } else { self.time + dt };
        self.dt_prev = Some(dt_free);
        self.dt_min = self.dt_min.min(dt);
        let totals = self.totals();
        match &report {
            StepReport::Sgh(r) => {
                self.ledger.audit_step(totals, &r.boundary, dt)?;
                self.entropy.record(&r.entropy_production, &r.entropy_scale);
                self.entropy.record_expansion(&r.entropy_production, &r.du);
            }
            StepReport::Cch(r) => {
                self.ledger.audit_step(totals, &r.boundary, dt)?;
                self.entropy.record(&r.entropy_production, &r.entropy_scale);
            }
        }
        self.entropy.update_monitor(self.entropy_monitor());
        Ok(dt)
    }

    /// Steps until `t` is reached exactly.
    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        while self.time < t {
            self.step(t)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub profile: Profile,
    /// `(x, u)` at the nodes, staggered runs only.
    pub nodes: Option<(Vec<f64>, Vec<f64>)>,
    pub snapshots: Vec<(f64, Profile)>,
    pub final_time: f64,
    pub steps: usize,
    pub dt_min: f64,
    pub ledger: ConservationLedger,
    pub entropy: EntropyMonitor,
    pub mesh: Mesh1D,
    pub scheme: Scheme,
    pub wall_time: Duration,
}

impl RunResult {
    /// Deterministic run summary (no wall-clock values).
    pub fn summary(&self, config: &RunConfig) -> Summary {
        let mut s = Summary::new();
        s.set("problem", &config.problem.name)
            .set("method", config.method)
            .set("cells", config.n_cells)
            .set("t_end", config.t_end())
            .set("final_time", self.final_time)
            .set("steps", self.steps)
            .set("dt_min", self.dt_min);
        match config.method {
            Method::Sgh => s.set(
                "sgh_mode",
                match config.sgh_mode {
                    SghMode::PredictorOnly => "predictor_only",
                    SghMode::PredictorCorrector => "predictor_corrector",
                },
            ),
            Method::Cch => s.set(
                "cch_solver",
                match config.cch_solver {
                    SolverOrder::Acoustic => "acoustic",
                    SolverOrder::Quadratic => "quadratic",
                },
            ),
        };
        let l = &self.ledger;
        s.set("mass_initial", l.initial.mass)
            .set("mass_final", l.current.mass)
            .set("mass_drift", l.mass_drift())
            .set("momentum_initial", l.initial.momentum)
            .set("momentum_final", l.current.momentum)
            .set("momentum_drift", l.momentum_drift())
            .set("boundary_impulse", l.boundary_impulse())
            .set("momentum_residual", l.momentum_residual())
            .set("energy_initial", l.initial.energy)
            .set("energy_final", l.current.energy)
            .set("energy_drift", l.energy_drift())
            .set("boundary_work", l.boundary_work())
            .set("energy_residual", l.energy_residual())
            .set("ledger_violations", l.violations.len())
            .set("entropy_min_normalized", self.entropy.min_normalized)
            .set("entropy_violations", self.entropy.violation_count());
        if config.method == Method::Sgh {
            s.set("entropy_isentropic_breaches", self.entropy.isentropic_breaches);
        }
        s
    }

    /// Writes the profile, node and summary files (plus snapshots) into
    /// `dir`; returns the paths written. Wall time goes to a separate
    /// `.timing` file so the others are reproducible bit for bit.
    pub fn write(&self, config: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>> {
        let stem = config.stem();
        let mut written = Vec::new();
        let mut put = |name: String, text: String| -> Result<()> {
            let path = dir.join(name);
            write_text(&path, &text)?;
            written.push(path);
            Ok(())
        };
        put(format!("{stem}.csv"), self.profile.to_csv())?;
        if let Some((x, u)) = &self.nodes {
            put(format!("{stem}.nodes"), nodes_csv(x, u))?;
        }
        put(format!("{stem}.summary"), self.summary(config).render())?;
        for (t, prof) in &self.snapshots {
            put(format!("{stem}_t{t}.csv"), prof.to_csv())?;
        }
        put(format!("{stem}.timing"), format!("wall_time_s={}\n", self.wall_time.as_secs_f64()))?;
        Ok(written)
    }
}

/// Runs `config` to its end time.
pub fn run(config: &RunConfig) -> Result<RunResult> {
    let start = Instant::now();
    let mut sim = Simulation::new(config.clone())?;
    let t_end = config.t_end();
    let mut stops: Vec<f64> = config.snapshot_times.clone();
    stops.sort_by(f64::total_cmp);
    stops.dedup();
    let mut snapshots = Vec::with_capacity(stops.len());
    for t in stops {
        sim.advance_to(t)?;
        snapshots.push((t, sim.profile()));
    }
    sim.advance_to(t_end)?;
    Ok(RunResult {
        profile: sim.profile(),
        nodes: sim.node_velocities().map(|u| (sim.mesh.node_x.clone(), u.to_vec())),
        snapshots,
        final_time: sim.time,
        steps: sim.steps,
        dt_min: sim.dt_min,
        wall_time: start.elapsed(),
        ledger: sim.ledger,
        entropy: sim.entropy,
        mesh: sim.mesh,
        scheme: sim.scheme,
    })
}

pub const ERROR_FIELDS: [&str; 4] = ["rho", "u", "p", "eps"];

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub cells: usize,
    /// L1 error per entry of [`ERROR_FIELDS`].
    pub l1: [f64; 4],
    pub steps: usize,
}

#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub results: Vec<RunResult>,
}

impl ConvergenceTable {
    fn index(field: &str) -> usize {
        ERROR_FIELDS.iter().position(|f| *f == field).unwrap_or_else(|| panic!("unknown field {field}"))
    }

    pub fn errors(&self, field: &str) -> Vec<f64> {
        let i = Self::index(field);
        self.rows.iter().map(|r| r.l1[i]).collect()
    }

    pub fn cells(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.cells).collect()
    }

    pub fn order(&self, field: &str) -> Option<f64> {
        convergence_order(&self.cells(), &self.errors(field))
    }

    pub fn strictly_decreasing(&self, field: &str) -> bool {
        self.errors(field).windows(2).all(|w| w[1] < w[0])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("cells,l1_rho,l1_u,l1_p,l1_eps\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{},{}\n", r.cells, r.l1[0], r.l1[1], r.l1[2], r.l1[3]));
        }
        let order = |f: &str| self.order(f).map_or_else(|| "absent".to_string(), |o| o.to_string());
        out.push_str(&format!("order,{},{},{},{}\n", order("rho"), order("u"), order("p"), order("eps")));
        out
    }
}

/// Independent runs at each resolution, compared with the problem's
/// reference at cell centers. Runs execute in parallel.
pub fn run_convergence(config: &RunConfig, cells: &[usize]) -> Result<ConvergenceTable> {
    config.validate()?;
    if cells.is_empty() {
        return Err(HydroError::Config("empty resolution list".into()));
    }
    let reference = config.problem.reference_solution(config.t_end())?;
    let outcomes: Vec<Result<(ConvergenceRow, RunResult)>> = cells
        .par_iter()
        .map(|&n| {
            let cfg = RunConfig { n_cells: n, ..config.clone() };
            let result = run(&cfg).map_err(|e| e.context(format!("run with {n} cells")))?;
            let exact = reference.sample(&result.profile.x);
            let volumes = result.mesh.cell_volumes();
            let mut l1 = [0.0; 4];
            for (i, f) in ERROR_FIELDS.iter().enumerate() {
                l1[i] = l1_error(result.profile.field(f).unwrap(), exact.field(f).unwrap(), &volumes)?;
            }
            Ok((ConvergenceRow { cells: n, l1, steps: result.steps }, result))
        })
        .collect();
    let mut rows = Vec::with_capacity(cells.len());
    let mut results = Vec::with_capacity(cells.len());
    for o in outcomes {
        let (row, result) = o?;
        rows.push(row);
        results.push(result);
    }
    Ok(ConvergenceTable { rows, results })
}
