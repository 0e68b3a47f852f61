//! Cell-centered hydrodynamics.
//!
//! Each node gets a single `(u*, P*)` from the nodal solver; both adjacent
//! cells use it, which is what makes momentum and total energy telescope.
//! The cells are then advanced with one forward-Euler step.

use crate::boundary::{BoundaryCondition, BoundaryFlux, Boundaries};
use crate::closure::{
    cch_acoustic, cch_quadratic, left_side_pressure, quadratic_admissible, right_side_pressure, CellFace,
    NodalSolution, SolverOrder,
};
use crate::eos::IdealGas;
use crate::error::{HydroError, Result};
use crate::mesh::{CchState, Mesh1D};

#[derive(Debug, Clone, PartialEq)]
pub struct CchStepReport {
    pub dt_used: f64,
    pub nodal: Vec<NodalSolution>,
    /// `(P - P*_r)(u*_{j+1} - u) + (P - P*_l)(u - u*_j)` per cell.
    pub entropy_production: Vec<f64>,
    pub entropy_scale: Vec<f64>,
    pub boundary: BoundaryFlux,
}

fn face(state: &CchState, j: usize) -> CellFace {
    CellFace {
        rho: state.rho[j],
        c: state.c[j],
        p: state.p[j],
        u: state.u[j],
    }
}

fn solve_pair(left: &CellFace, right: &CellFace, gas: &IdealGas, solver: SolverOrder) -> Result<NodalSolution> {
    let acoustic = cch_acoustic(left, right);
    match solver {
        SolverOrder::Acoustic => Ok(acoustic),
        SolverOrder::Quadratic => cch_quadratic(left, right, gas, acoustic),
    }
}

/// Boundary node with the interior cell on its right (`left == true`) or
/// on its left.
fn solve_boundary(
    bc: BoundaryCondition,
    cell: &CellFace,
    gas: &IdealGas,
    solver: SolverOrder,
    left: bool,
) -> Result<NodalSolution> {
    let k = gas.half_gamma_plus_one();
    match bc {
        BoundaryCondition::Transmissive => solve_pair(cell, cell, gas, solver),
        BoundaryCondition::Wall | BoundaryCondition::PrescribedVelocity { .. } => {
            let u_star = bc.prescribed_velocity().unwrap_or(0.0);
            let expansion = if left { cell.u - u_star } else { u_star - cell.u };
            let quadratic = solver == SolverOrder::Quadratic && quadratic_admissible(cell, expansion, k);
            let p = if left {
                right_side_pressure(cell, u_star, k, quadratic)
            } else {
                left_side_pressure(cell, u_star, k, quadratic)
            };
            let order = if quadratic { SolverOrder::Quadratic } else { SolverOrder::Acoustic };
            Ok(NodalSolution { u_star, p_star_left: p, p_star_right: p, order })
        }
        BoundaryCondition::PrescribedPressure { p } => {
            let shift = (p - cell.p) / cell.impedance();
            let u_star = if left { cell.u + shift } else { cell.u - shift };
            Ok(NodalSolution { u_star, p_star_left: p, p_star_right: p, order: SolverOrder::Acoustic })
        }
    }
}

/// Nodal solution at every node, boundaries included.
pub fn solve_all_nodes(
    state: &CchState,
    gas: &IdealGas,
    bcs: &Boundaries,
    solver: SolverOrder,
) -> Result<Vec<NodalSolution>> {
    let n = state.rho.len();
    let mut nodal = Vec::with_capacity(n + 1);
    nodal.push(solve_boundary(bcs.left, &face(state, 0), gas, solver, true)?);
    for j in 1..n {
        nodal.push(solve_pair(&face(state, j - 1), &face(state, j), gas, solver)?);
    }
    nodal.push(solve_boundary(bcs.right, &face(state, n - 1), gas, solver, false)?);
    Ok(nodal)
}

/// Velocity jump `u*_{j+1} - u*_j` across each cell.
pub fn nodal_velocity_jumps(nodal: &[NodalSolution]) -> Vec<f64> {
    nodal.windows(2).map(|w| w[1].u_star - w[0].u_star).collect()
}

/// Forward-Euler update with precomputed nodal solutions.
pub fn step_with_nodes(
    state: &mut CchState,
    mesh: &mut Mesh1D,
    gas: &IdealGas,
    dt: f64,
    nodal: Vec<NodalSolution>,
) -> Result<CchStepReport> {
    let n = mesh.n_cells();
    if nodal.len() != n + 1 {
        return Err(HydroError::InvalidInput(format!("{} nodal solutions for {} nodes", nodal.len(), n + 1)));
    }
    let u_star: Vec<f64> = nodal.iter().map(|s| s.u_star).collect();
    let p_star: Vec<f64> = nodal.iter().map(NodalSolution::pressure).collect();

    let mut entropy_production = Vec::with_capacity(n);
    let mut entropy_scale = Vec::with_capacity(n);
    for j in 0..n {
        let (p, u, z) = (state.p[j], state.u[j], state.rho[j] * state.c[j]);
        let right = u_star[j + 1] - u;
        let left = u - u_star[j];
        entropy_production.push((p - p_star[j + 1]) * right + (p - p_star[j]) * left);
        entropy_scale.push(p.abs() * (right.abs() + left.abs()) + z * (right * right + left * left));
    }

    let mut new_mesh = mesh.clone();
    new_mesh.advance(&u_star, dt)?;
    let rho = new_mesh.densities();
    let mut u = Vec::with_capacity(n);
    let mut e_total = Vec::with_capacity(n);
    let mut eps = Vec::with_capacity(n);
    for j in 0..n {
        let k = dt / mesh.cell_mass[j];
        let un = state.u[j] + k * (p_star[j] - p_star[j + 1]);
        let en = state.e_total[j] + k * (p_star[j] * u_star[j] - p_star[j + 1] * u_star[j + 1]);
        let e = en - 0.5 * un * un;
        if !(un.is_finite() && en.is_finite()) {
            return Err(HydroError::NonFinite { quantity: "total energy", cell: j, step: 0 });
        }
        if e <= 0.0 {
            return Err(HydroError::PositivityLoss { quantity: "internal energy", cell: j, step: 0, value: e });
        }
        u.push(un);
        e_total.push(en);
        eps.push(e);
    }
    let mut next = CchState {
        rho,
        u,
        e_total,
        eps,
        p: vec![0.0; n],
        c: vec![0.0; n],
    };
    next.refresh_thermo(gas)?;
    *state = next;
    *mesh = new_mesh;

    let boundary = BoundaryFlux {
        left_pressure: p_star[0],
        left_velocity: u_star[0],
        right_pressure: p_star[n],
        right_velocity: u_star[n],
    };
    Ok(CchStepReport {
        dt_used: dt,
        nodal,
        entropy_production,
        entropy_scale,
        boundary,
    })
}

/// Solves every node and advances by `dt`.
pub fn step(
    state: &mut CchState,
    mesh: &mut Mesh1D,
    gas: &IdealGas,
    dt: f64,
    bcs: &Boundaries,
    solver: SolverOrder,
) -> Result<CchStepReport> {
    let nodal = solve_all_nodes(state, gas, bcs, solver)?;
    step_with_nodes(state, mesh, gas, dt, nodal)
}

pub fn total_momentum(state: &CchState, mesh: &Mesh1D) -> f64 {
    mesh.cell_mass.iter().zip(&state.u).map(|(m, u)| m * u).sum()
}

pub fn total_energy(state: &CchState, mesh: &Mesh1D) -> f64 {
    mesh.cell_mass.iter().zip(&state.e_total).map(|(m, e)| m * e).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_cch, Interval, LocalState};

    fn gas() -> IdealGas {
        IdealGas::new(1.4).unwrap()
    }

    fn uniform(u: f64) -> (Mesh1D, CchState) {
        build_cch(Interval::new(0.0, 1.0), 16, &gas(), |_| LocalState { rho: 1.2, u, eps: 2.0 }).unwrap()
    }

    #[test]
    fn uniform_state_nodes() {
        let (_, st) = uniform(0.3);
        for solver in [SolverOrder::Acoustic, SolverOrder::Quadratic] {
            let nodal = solve_all_nodes(&st, &gas(), &Boundaries::TRANSMISSIVE, solver).unwrap();
            for s in &nodal {
                assert!((s.u_star - 0.3).abs() < 1e-15);
                assert!((s.pressure() - st.p[0]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn wall_star_pressure_sign() {
        let bcs = Boundaries::new(BoundaryCondition::Wall, BoundaryCondition::Transmissive);
        // Flow into the wall compresses, flow away from it expands.
        let (_, st) = uniform(-0.2);
        let nodal = solve_all_nodes(&st, &gas(), &bcs, SolverOrder::Acoustic).unwrap();
        assert_eq!(nodal[0].u_star, 0.0);
        assert!(nodal[0].pressure() > st.p[0]);
        let (_, st) = uniform(0.2);
        let nodal = solve_all_nodes(&st, &gas(), &bcs, SolverOrder::Quadratic).unwrap();
        assert_eq!(nodal[0].u_star, 0.0);
        assert!(nodal[0].pressure() < st.p[0]);
    }

    #[test]
    fn prescribed_pressure_boundary() {
        let bcs = Boundaries::new(
            BoundaryCondition::PrescribedPressure { p: 0.5 },
            BoundaryCondition::PrescribedPressure { p: 0.5 },
        );
        let (_, st) = uniform(0.0);
        let nodal = solve_all_nodes(&st, &gas(), &bcs, SolverOrder::Quadratic).unwrap();
        // Lower outside pressure lets both ends move outwards.
        assert!(nodal[0].u_star < 0.0);
        assert!(nodal[16].u_star > 0.0);
        assert!((nodal[0].u_star + nodal[16].u_star).abs() < 1e-15);
    }

    #[test]
    fn uniform_state_translates() {
        let g = gas();
        let (mut mesh, mut st) = uniform(0.5);
        let before = st.clone();
        step(&mut st, &mut mesh, &g, 0.01, &Boundaries::TRANSMISSIVE, SolverOrder::Quadratic).unwrap();
        for j in 0..16 {
            assert!((st.rho[j] - before.rho[j]).abs() < 1e-13);
            assert!((st.u[j] - 0.5).abs() < 1e-15);
        }
        assert!((mesh.node_x[0] - 0.005).abs() < 1e-15);
    }

    fn sod(n: usize) -> (Mesh1D, CchState) {
        build_cch(Interval::new(0.0, 1.0), n, &gas(), |x| {
            if x < 0.5 {
                LocalState { rho: 1.0, u: 0.0, eps: 2.5 }
            } else {
                LocalState { rho: 0.125, u: 0.0, eps: 2.0 }
            }
        })
        .unwrap()
    }

    #[test]
    fn sod_interface_node_is_acoustic_value() {
        let (_, st) = sod(10);
        let nodal = solve_all_nodes(&st, &gas(), &Boundaries::TRANSMISSIVE, SolverOrder::Acoustic).unwrap();
        assert!((nodal[5].u_star - 0.68415).abs() < 1e-5);
        for (j, s) in nodal.iter().enumerate() {
            if j != 5 {
                assert_eq!(s.u_star, 0.0);
            }
        }
    }

    #[test]
    fn sod_single_step_conserves() {
        let g = gas();
        for solver in [SolverOrder::Acoustic, SolverOrder::Quadratic] {
            let (mut mesh, mut st) = sod(100);
            let e0 = total_energy(&st, &mesh);
            let m0 = total_momentum(&st, &mesh);
            let dt = 1e-3;
            let rep = step(&mut st, &mut mesh, &g, dt, &Boundaries::TRANSMISSIVE, solver).unwrap();
            let de = total_energy(&st, &mesh) - e0;
            let dm = total_momentum(&st, &mesh) - m0;
            assert!((de - rep.boundary.work(dt)).abs() <= 1e-12 * e0);
            assert!((dm - rep.boundary.impulse(dt)).abs() <= 1e-12 * rep.boundary.impulse(dt).abs().max(1e-3));
            let eps_ok = st.eps.iter().zip(&st.e_total).zip(&st.u).all(|((e, et), u)| *e == et - 0.5 * u * u);
            assert!(eps_ok);
        }
    }

    #[test]
    fn mirror_symmetry_is_kept() {
        let g = gas();
        let (mut mesh, mut st) = build_cch(Interval::new(-1.0, 1.0), 40, &g, |x| LocalState {
            rho: 1.0 + 0.5 * (-4.0 * x * x).exp(),
            u: -0.3 * x,
            eps: 1.0 + (-8.0 * x * x).exp(),
        })
        .unwrap();
        for _ in 0..100 {
            step(&mut st, &mut mesh, &g, 1e-3, &Boundaries::TRANSMISSIVE, SolverOrder::Quadratic).unwrap();
        }
        for j in 0..20 {
            let k = 39 - j;
            assert!((st.rho[j] - st.rho[k]).abs() <= 1e-10 * st.rho[j]);
            assert!((st.u[j] + st.u[k]).abs() <= 1e-10);
            assert!((st.eps[j] - st.eps[k]).abs() <= 1e-10 * st.eps[j]);
        }
    }

    #[test]
    fn entropy_is_nonnegative() {
        let g = gas();
        for solver in [SolverOrder::Acoustic, SolverOrder::Quadratic] {
            let (mut mesh, mut st) = sod(100);
            for _ in 0..200 {
                let rep = step(&mut st, &mut mesh, &g, 5e-4, &Boundaries::TRANSMISSIVE, solver).unwrap();
                for (p, s) in rep.entropy_production.iter().zip(&rep.entropy_scale) {
                    assert!(*p >= -1e-12 * s);
                }
            }
        }
        let (_, st) = uniform(0.1);
        let (mut mesh, mut st2) = (uniform(0.1).0, st);
        let rep = step(&mut st2, &mut mesh, &g, 1e-3, &Boundaries::TRANSMISSIVE, SolverOrder::Quadratic).unwrap();
        assert!(rep.entropy_production.iter().all(|p| p.abs() < 1e-15));
    }
}
