//! Staggered-grid hydrodynamics.
//!
//! One step is: star pressure per cell from the node velocity jump, nodal
//! acceleration from the pressure difference across each node's dual cell,
//! then the update of velocity, internal energy and geometry with the
//! time-centered node velocity `u* = u^n + alpha dt / 2`.

use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryCondition, BoundaryFlux, Boundaries};
use crate::closure::sgh_star_pressure;
use crate::eos::IdealGas;
use crate::error::{HydroError, Result};
use crate::mesh::{Mesh1D, SghState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SghMode {
    /// Single pass, as used for all the benchmark runs.
    #[default]
    PredictorOnly,
    PredictorCorrector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SghStepReport {
    pub dt_used: f64,
    /// Star pressure per cell (time-averaged over both passes in
    /// predictor-corrector mode).
    pub p_star: Vec<f64>,
    /// Time-centered node velocities used to move the mesh.
    pub u_star: Vec<f64>,
    /// `(p - p*) (u_{j+1} - u_j)` per cell.
    pub entropy_production: Vec<f64>,
    /// Magnitude the production is compared against: `|p du| + rho c du^2`.
    pub entropy_scale: Vec<f64>,
    /// Velocity jump across each cell; in predictor-corrector mode the
    /// smaller of the two passes.
    pub du: Vec<f64>,
    pub boundary: BoundaryFlux,
}

/// Star pressures and velocity jumps for every cell.
pub fn star_pressures(state: &SghState, gas: &IdealGas) -> (Vec<f64>, Vec<f64>) {
    let du: Vec<f64> = state.node_u.windows(2).map(|w| w[1] - w[0]).collect();
    let p_star = du
        .iter()
        .enumerate()
        .map(|(j, &d)| sgh_star_pressure(state.rho[j], state.c[j], state.p[j], d, gas))
        .collect();
    (p_star, du)
}

/// Newton's law on each dual cell: `alpha_j = (P*_{j-1/2} - P*_{j+1/2}) / m_j`.
///
/// `boundary_pressure` supplies the pressure acting on the outer face of
/// the two boundary nodes.
pub fn nodal_acceleration(p_star: &[f64], boundary_pressure: (f64, f64), node_mass: &[f64]) -> Vec<f64> {
    let n = p_star.len();
    let mut alpha = Vec::with_capacity(n + 1);
    alpha.push((boundary_pressure.0 - p_star[0]) / node_mass[0]);
    for j in 1..n {
        alpha.push((p_star[j - 1] - p_star[j]) / node_mass[j]);
    }
    alpha.push((p_star[n - 1] - boundary_pressure.1) / node_mass[n]);
    alpha
}

/// `u* = u^n + alpha dt / 2`.
pub fn half_step_velocity(u_n: &[f64], accel: &[f64], dt: f64) -> Vec<f64> {
    u_n.iter().zip(accel).map(|(u, a)| u + 0.5 * a * dt).collect()
}

/// Velocity imposed on a boundary node over the step, if any.
///
/// A transmissive end extrapolates the neighbouring node velocity, so the
/// boundary node follows the flow instead of coasting at its own speed.
fn boundary_velocity(bc: BoundaryCondition, u_n: &[f64], left: bool) -> Option<f64> {
    let n = u_n.len() - 1;
    match bc {
        BoundaryCondition::Transmissive => Some(if left { u_n[1] } else { u_n[n - 1] }),
        BoundaryCondition::PrescribedPressure { .. } => None,
        _ => bc.prescribed_velocity(),
    }
}

/// Pressure on the outer face of a boundary node.
///
/// For an imposed velocity this is the reaction that yields exactly that
/// node velocity at the end of the step.
fn boundary_pressure(
    bc: BoundaryCondition,
    u_n: &[f64],
    adjacent_p_star: f64,
    node_mass: f64,
    dt: f64,
    left: bool,
) -> f64 {
    let n = u_n.len() - 1;
    match (bc, boundary_velocity(bc, u_n, left)) {
        (BoundaryCondition::PrescribedPressure { p }, _) => p,
        (_, Some(target)) => {
            let u = if left { u_n[0] } else { u_n[n] };
            let force = node_mass * (target - u) / dt;
            if left {
                adjacent_p_star + force
            } else {
                adjacent_p_star - force
            }
        }
        (_, None) => unreachable!("only prescribed pressure leaves the node velocity free"),
    }
}

fn boundary_pressures(bcs: &Boundaries, mesh: &Mesh1D, u_n: &[f64], p_star: &[f64], dt: f64) -> (f64, f64) {
    let n = p_star.len();
    let left = boundary_pressure(bcs.left, u_n, p_star[0], mesh.node_mass[0], dt, true);
    let right = boundary_pressure(bcs.right, u_n, p_star[n - 1], mesh.node_mass[n], dt, false);
    (left, right)
}

/// Shared update: velocity, internal energy, geometry, thermodynamics.
fn advance(
    state: &SghState,
    mesh: &Mesh1D,
    gas: &IdealGas,
    bcs: &Boundaries,
    p_cell: &[f64],
    p_bnd: (f64, f64),
    dt: f64,
) -> Result<(SghState, Mesh1D, Vec<f64>, BoundaryFlux)> {
    let n = mesh.n_cells();
    let alpha = nodal_acceleration(p_cell, p_bnd, &mesh.node_mass);
    let mut u_star = half_step_velocity(&state.node_u, &alpha, dt);
    let mut node_u: Vec<f64> = u_star.iter().zip(&state.node_u).map(|(s, u)| 2.0 * s - u).collect();
    if let Some(ub) = boundary_velocity(bcs.left, &state.node_u, true) {
        u_star[0] = 0.5 * (state.node_u[0] + ub);
        node_u[0] = ub;
    }
    if let Some(ub) = boundary_velocity(bcs.right, &state.node_u, false) {
        u_star[n] = 0.5 * (state.node_u[n] + ub);
        node_u[n] = ub;
    }

    let mut eps = Vec::with_capacity(n);
    for j in 0..n {
        let e = state.eps[j] - dt / mesh.cell_mass[j] * p_cell[j] * (u_star[j + 1] - u_star[j]);
        if !e.is_finite() {
            return Err(HydroError::NonFinite { quantity: "internal energy", cell: j, step: 0 });
        }
        if e <= 0.0 {
            return Err(HydroError::PositivityLoss { quantity: "internal energy", cell: j, step: 0, value: e });
        }
        eps.push(e);
    }

    let mut new_mesh = mesh.clone();
    new_mesh.advance(&u_star, dt)?;
    let mut next = SghState {
        node_u,
        rho: new_mesh.densities(),
        eps,
        p: vec![0.0; n],
        c: vec![0.0; n],
    };
    next.refresh_thermo(gas)?;
    let flux = BoundaryFlux {
        left_pressure: p_bnd.0,
        left_velocity: u_star[0],
        right_pressure: p_bnd.1,
        right_velocity: u_star[n],
    };
    Ok((next, new_mesh, u_star, flux))
}

fn entropy_terms(state: &SghState, p_star: &[f64], du: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let production = (0..du.len()).map(|j| (state.p[j] - p_star[j]) * du[j]).collect();
    let scale = (0..du.len())
        .map(|j| (state.p[j] * du[j]).abs() + state.rho[j] * state.c[j] * du[j] * du[j])
        .collect();
    (production, scale)
}

/// Predictor pass: produces the provisional end-of-step state.
pub fn predictor_step(
    state: &SghState,
    mesh: &Mesh1D,
    gas: &IdealGas,
    dt: f64,
    bcs: &Boundaries,
) -> Result<(SghState, Mesh1D, SghStepReport)> {
    let (p_star, du) = star_pressures(state, gas);
    let p_bnd = boundary_pressures(bcs, mesh, &state.node_u, &p_star, dt);
    let (next, next_mesh, u_star, boundary) = advance(state, mesh, gas, bcs, &p_star, p_bnd, dt)?;
    let (entropy_production, entropy_scale) = entropy_terms(state, &p_star, &du);
    let report = SghStepReport {
        dt_used: dt,
        p_star,
        u_star,
        entropy_production,
        entropy_scale,
        du,
        boundary,
    };
    Ok((next, next_mesh, report))
}

/// Corrector pass: re-evaluates the star pressure on the provisional state
/// and redoes the update from `t^n` with the average of both star
/// pressures.
pub fn corrector_step(
    state_n: &SghState,
    mesh_n: &Mesh1D,
    provisional: &SghState,
    predictor: &SghStepReport,
    gas: &IdealGas,
    dt: f64,
    bcs: &Boundaries,
) -> Result<(SghState, Mesh1D, SghStepReport)> {
    let (p_corr, du_corr) = star_pressures(provisional, gas);
    let p_avg: Vec<f64> = predictor.p_star.iter().zip(&p_corr).map(|(a, b)| 0.5 * (a + b)).collect();
    let p_bnd = boundary_pressures(bcs, mesh_n, &state_n.node_u, &p_avg, dt);
    let (next, next_mesh, u_star, boundary) = advance(state_n, mesh_n, gas, bcs, &p_avg, p_bnd, dt)?;
    let (prod_c, scale_c) = entropy_terms(provisional, &p_corr, &du_corr);
    let entropy_production = predictor
        .entropy_production
        .iter()
        .zip(&prod_c)
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let entropy_scale = predictor.entropy_scale.iter().zip(&scale_c).map(|(a, b)| 0.5 * (a + b)).collect();
    let du = predictor.du.iter().zip(&du_corr).map(|(a, b)| a.min(*b)).collect();
    let report = SghStepReport {
        dt_used: dt,
        p_star: p_avg,
        u_star,
        entropy_production,
        entropy_scale,
        du,
        boundary,
    };
    Ok((next, next_mesh, report))
}

/// Advances `state` and `mesh` by `dt` in place.
pub fn step(
    state: &mut SghState,
    mesh: &mut Mesh1D,
    gas: &IdealGas,
    dt: f64,
    bcs: &Boundaries,
    mode: SghMode,
) -> Result<SghStepReport> {
    let (pred, pred_mesh, report) = predictor_step(state, mesh, gas, dt, bcs)?;
    let (next, next_mesh, report) = match mode {
        SghMode::PredictorOnly => (pred, pred_mesh, report),
        SghMode::PredictorCorrector => corrector_step(state, mesh, &pred, &report, gas, dt, bcs)?,
    };
    *state = next;
    *mesh = next_mesh;
    Ok(report)
}

/// `sum m_j u_j` over nodes.
pub fn total_momentum(state: &SghState, mesh: &Mesh1D) -> f64 {
    mesh.node_mass.iter().zip(&state.node_u).map(|(m, u)| m * u).sum()
}

/// Internal energy of the cells plus kinetic energy of the nodes.
pub fn total_energy(state: &SghState, mesh: &Mesh1D) -> f64 {
    let internal: f64 = mesh.cell_mass.iter().zip(&state.eps).map(|(m, e)| m * e).sum();
    let kinetic: f64 = mesh.node_mass.iter().zip(&state.node_u).map(|(m, u)| 0.5 * m * u * u).sum();
    internal + kinetic
}
