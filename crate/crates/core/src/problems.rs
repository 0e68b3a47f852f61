//! Benchmark problem definitions and their reference solutions.

use serde::{Deserialize, Serialize};

use crate::boundary::{Boundaries, BoundaryCondition};
use crate::diagnostics::interpolate;
use crate::eos::{IdealGas, GAMMA_DIATOMIC, GAMMA_MONOATOMIC};
use crate::error::{HydroError, Result};
use crate::mesh::{Interval, LocalState, Mesh1D};
use crate::output::Profile;
use crate::riemann::{ExactRiemann, Primitive};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Density {
    Uniform(f64),
    /// `mean + amplitude sin(wavenumber x)`.
    Sinusoidal { mean: f64, amplitude: f64, wavenumber: f64 },
}

impl Density {
    pub fn at(&self, x: f64) -> f64 {
        match *self {
            Density::Uniform(rho) => rho,
            Density::Sinusoidal { mean, amplitude, wavenumber } => mean + amplitude * (wavenumber * x).sin(),
        }
    }
}

/// Thermodynamic initial datum: pressure or specific total energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Thermo {
    Pressure(f64),
    TotalEnergy(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub lo: f64,
    pub hi: f64,
    pub density: Density,
    pub u: f64,
    pub thermo: Thermo,
}

impl Region {
    fn state(&self, x: f64, gas: &IdealGas) -> LocalState {
        let rho = self.density.at(x);
        let eps = match self.thermo {
            Thermo::Pressure(p) => gas.internal_energy(rho, p),
            Thermo::TotalEnergy(e) => e - 0.5 * self.u * self.u,
        };
        LocalState { rho, u: self.u, eps }
    }
}

/// Energy placed in the cell(s) at `x`, replacing the background.
///
/// When `x` falls on a node the deposit is split evenly between the two
/// cells sharing it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyDeposit {
    pub x: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reference {
    ExactRiemann,
    /// Quadratic cell-centered run with this many cells.
    SelfConverged { cells: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub name: String,
    pub domain: Interval,
    pub t_end: f64,
    pub gamma: f64,
    pub regions: Vec<Region>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deposit: Option<EnergyDeposit>,
    pub bc_left: BoundaryCondition,
    pub bc_right: BoundaryCondition,
    pub reference: Reference,
}

pub const PROBLEM_NAMES: [&str; 6] = ["sod", "lax", "double_rarefaction", "sedov", "shu_osher", "leblanc"];

fn uniform(lo: f64, hi: f64, rho: f64, u: f64, p: f64) -> Region {
    Region { lo, hi, density: Density::Uniform(rho), u, thermo: Thermo::Pressure(p) }
}

fn riemann(name: &str, domain: (f64, f64), x0: f64, l: (f64, f64, f64), r: (f64, f64, f64), t_end: f64, gamma: f64) -> ProblemSpec {
    ProblemSpec {
        name: name.into(),
        domain: Interval::new(domain.0, domain.1),
        t_end,
        gamma,
        regions: vec![uniform(domain.0, x0, l.0, l.1, l.2), uniform(x0, domain.1, r.0, r.1, r.2)],
        deposit: None,
        bc_left: BoundaryCondition::Transmissive,
        bc_right: BoundaryCondition::Transmissive,
        reference: Reference::ExactRiemann,
    }
}

impl ProblemSpec {
    pub fn sod() -> Self {
        riemann("sod", (0.0, 1.0), 0.5, (1.0, 0.0, 1.0), (0.125, 0.0, 0.1), 0.2, GAMMA_DIATOMIC)
    }

    pub fn lax() -> Self {
        riemann("lax", (0.0, 1.0), 0.5, (0.445, 0.698, 3.528), (0.5, 0.0, 0.571), 0.16, GAMMA_DIATOMIC)
    }

    pub fn double_rarefaction() -> Self {
        ProblemSpec {
            bc_left: BoundaryCondition::PrescribedVelocity { u: -2.0 },
            bc_right: BoundaryCondition::PrescribedVelocity { u: 2.0 },
            ..riemann("double_rarefaction", (0.0, 1.0), 0.5, (1.0, -2.0, 0.4), (1.0, 2.0, 0.4), 0.15, GAMMA_DIATOMIC)
        }
    }

    pub fn sedov() -> Self {
        ProblemSpec {
            name: "sedov".into(),
            domain: Interval::new(-2.0, 2.0),
            t_end: 0.001,
            gamma: GAMMA_DIATOMIC,
            regions: vec![Region {
                lo: -2.0,
                hi: 2.0,
                density: Density::Uniform(1.0),
                u: 0.0,
                thermo: Thermo::TotalEnergy(1e-12),
            }],
            deposit: Some(EnergyDeposit { x: 0.0, energy: 3.2e6 }),
            bc_left: BoundaryCondition::Transmissive,
            bc_right: BoundaryCondition::Transmissive,
            reference: Reference::SelfConverged { cells: 3200 },
        }
    }

    pub fn shu_osher() -> Self {
        ProblemSpec {
            name: "shu_osher".into(),
            domain: Interval::new(-5.0, 5.0),
            t_end: 1.8,
            gamma: GAMMA_DIATOMIC,
            regions: vec![
                uniform(-5.0, -4.0, 3.857143, 2.629369, 10.333333),
                Region {
                    lo: -4.0,
                    hi: 5.0,
                    density: Density::Sinusoidal { mean: 1.0, amplitude: 0.2, wavenumber: 5.0 },
                    u: 0.0,
                    thermo: Thermo::Pressure(1.0),
                },
            ],
            deposit: None,
            bc_left: BoundaryCondition::Transmissive,
            bc_right: BoundaryCondition::Transmissive,
            reference: Reference::SelfConverged { cells: 3200 },
        }
    }

    /// High-energy gas on the left, near-vacuum on the right.
    pub fn leblanc() -> Self {
        riemann(
            "leblanc",
            (0.0, 9.0),
            3.0,
            (1.0, 0.0, 2.0 / 3.0 * 1e-1),
            (1e-3, 0.0, 2.0 / 3.0 * 1e-10),
            6.0,
            GAMMA_MONOATOMIC,
        )
    }

    /// Looks a benchmark up by name; dashes and underscores are equivalent.
    pub fn named(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().replace('-', "_").as_str() {
            "sod" => Ok(Self::sod()),
            "lax" => Ok(Self::lax()),
            "double_rarefaction" => Ok(Self::double_rarefaction()),
            "sedov" => Ok(Self::sedov()),
            "shu_osher" => Ok(Self::shu_osher()),
            "leblanc" => Ok(Self::leblanc()),
            other => Err(HydroError::Config(format!(
                "unknown problem '{other}' (expected one of {})",
                PROBLEM_NAMES.join(", ")
            ))),
        }
    }

    pub fn gas(&self) -> Result<IdealGas> {
        IdealGas::new(self.gamma)
    }

    pub fn boundaries(&self) -> Boundaries {
        Boundaries::new(self.bc_left, self.bc_right)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HydroError::Config(format!("problem '{}': {msg}", self.name)));
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end = {}", self.t_end));
        }
        self.gas()?;
        self.bc_left.validate()?;
        self.bc_right.validate()?;
        let (first, last) = match (self.regions.first(), self.regions.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return bad("no regions".into()),
        };
        if first.lo != self.domain.lo || last.hi != self.domain.hi {
            return bad("regions do not cover the domain".into());
        }
        for w in self.regions.windows(2) {
            if w[0].hi != w[1].lo {
                return bad(format!("gap or overlap at x = {}", w[0].hi));
            }
        }
        for r in &self.regions {
            let values = [r.lo, r.hi, r.u];
            let datum = match r.thermo {
                Thermo::Pressure(v) | Thermo::TotalEnergy(v) => v,
            };
            if !(r.hi > r.lo) || values.iter().any(|v| !v.is_finite()) || !datum.is_finite() {
                return bad(format!("malformed region {r:?}"));
            }
        }
        if let Some(d) = self.deposit {
            if !(self.domain.contains(d.x) && d.energy.is_finite() && d.energy > 0.0) {
                return bad(format!("malformed energy deposit {d:?}"));
            }
        }
        Ok(())
    }

    fn region_at(&self, x: f64) -> &Region {
        self.regions
            .iter()
            .find(|r| x >= r.lo && x < r.hi)
            .unwrap_or_else(|| self.regions.last().expect("validated problem has regions"))
    }

    /// Pointwise initial state, without the energy deposit.
    pub fn initial_state(&self, x: f64) -> Result<LocalState> {
        Ok(self.region_at(x).state(x, &self.gas()?))
    }

    /// Uniform mesh of `n_cells` cells and the initial state of each cell.
    pub fn initial_cells(&self, n_cells: usize) -> Result<(Mesh1D, Vec<LocalState>)> {
        self.validate()?;
        let gas = self.gas()?;
        let mesh = Mesh1D::uniform(self.domain, n_cells, |x| self.region_at(x).density.at(x))?;
        let mut cells: Vec<LocalState> = mesh.cell_centers().iter().map(|&x| self.region_at(x).state(x, &gas)).collect();
        if let Some(d) = self.deposit {
            for (j, share) in deposit_cells(&mesh.node_x, d.x) {
                let e = d.energy * share / mesh.cell_mass[j];
                cells[j].eps = e - 0.5 * cells[j].u * cells[j].u;
            }
        }
        Ok((mesh, cells))
    }

    /// Exact Riemann data when the problem is a two-state Riemann problem.
    pub fn riemann_problem(&self) -> Result<ExactRiemann> {
        let unsupported = || HydroError::Config(format!("problem '{}' is not a Riemann problem", self.name));
        if self.regions.len() != 2 || self.deposit.is_some() {
            return Err(unsupported());
        }
        let prim = |r: &Region| -> Result<Primitive> {
            let rho = match r.density {
                Density::Uniform(rho) => rho,
                _ => return Err(unsupported()),
            };
            let p = match r.thermo {
                Thermo::Pressure(p) => p,
                Thermo::TotalEnergy(e) => (self.gamma - 1.0) * rho * (e - 0.5 * r.u * r.u),
            };
            Ok(Primitive { rho, u: r.u, p })
        };
        ExactRiemann::new(prim(&self.regions[0])?, prim(&self.regions[1])?, self.gamma, self.regions[0].hi)
    }

    /// Reference solution at time `t`, ready to be sampled.
    pub fn reference_solution(&self, t: f64) -> Result<ReferenceSolution> {
        self.validate()?;
        if !(t >= 0.0 && t <= self.t_end) {
            return Err(HydroError::InvalidInput(format!("reference time {t} outside [0, {}]", self.t_end)));
        }
        match self.reference {
            Reference::ExactRiemann => Ok(ReferenceSolution::Exact { solution: self.riemann_problem()?, t }),
            Reference::SelfConverged { cells } => {
                let mut cfg = crate::driver::RunConfig::new(self.clone(), crate::driver::Method::Cch, cells);
                cfg.t_end = Some(t);
                let result = crate::driver::run(&cfg)?;
                Ok(ReferenceSolution::Discrete(result.profile))
            }
        }
    }
}

/// Cells receiving a point deposit at `x` and their share of it.
fn deposit_cells(node_x: &[f64], x: f64) -> Vec<(usize, f64)> {
    let n = node_x.len() - 1;
    let dx = (node_x[n] - node_x[0]) / n as f64;
    let i = node_x.partition_point(|&v| v <= x).clamp(1, n);
    // Nodes i-1 and i bracket x.
    let on_node = |k: usize| (node_x[k] - x).abs() <= 1e-9 * dx;
    if on_node(i - 1) && i - 1 > 0 {
        vec![(i - 2, 0.5), (i - 1, 0.5)]
    } else if on_node(i) && i < n {
        vec![(i - 1, 0.5), (i, 0.5)]
    } else {
        vec![(i - 1, 1.0)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceSolution {
    Exact { solution: ExactRiemann, t: f64 },
    /// Cell-center profile of a fine run, linearly interpolated.
    Discrete(Profile),
}

impl ReferenceSolution {
    pub fn sample(&self, x: &[f64]) -> Profile {
        match self {
            ReferenceSolution::Exact { solution, t } => {
                let g = solution.gamma;
                let mut prof = Profile::with_capacity(x.len());
                for &xi in x {
                    let s = solution.sample(xi, *t);
                    let eps = if s.rho > 0.0 { s.p / ((g - 1.0) * s.rho) } else { 0.0 };
                    prof.push(xi, s.rho, s.u, s.p, eps);
                }
                prof
            }
            ReferenceSolution::Discrete(fine) => {
                let mut prof = Profile::with_capacity(x.len());
                for &xi in x {
                    let at = |ys: &[f64]| interpolate(&fine.x, ys, xi);
                    prof.push(xi, at(&fine.rho), at(&fine.u), at(&fine.p), at(&fine.eps));
                }
                prof
            }
        }
    }
}

/// Reference profiles of `problem` at the points `x` and time `t`.
pub fn sample_reference(problem: &ProblemSpec, x: &[f64], t: f64) -> Result<Profile> {
    if t == 0.0 {
        let gas = problem.gas()?;
        let mut prof = Profile::with_capacity(x.len());
        for &xi in x {
            let s = problem.initial_state(xi)?;
            prof.push(xi, s.rho, s.u, gas.pressure(s.rho, s.eps)?, s.eps);
        }
        return Ok(prof);
    }
    Ok(problem.reference_solution(t)?.sample(x))
}
