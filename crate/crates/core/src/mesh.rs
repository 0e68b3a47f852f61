//! One-dimensional Lagrangian grid and the two state layouts that live on it.
//!
//! Nodes are numbered `0..=N`, cells `0..N`; cell `j` spans
//! `[x_j, x_{j+1}]`. Every cell is split at its midpoint into a left and a
//! right sub-cell, and the node mass is the sum of the two sub-cell masses
//! touching it. All masses are fixed when the mesh is built.

use serde::{Deserialize, Serialize};

use crate::eos::IdealGas;
use crate::error::{HydroError, Result};

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    pub node_x: Vec<f64>,
    pub cell_mass: Vec<f64>,
    pub node_mass: Vec<f64>,
    pub subcell_mass_left: Vec<f64>,
    pub subcell_mass_right: Vec<f64>,
}

/// Initial data at a point: density, velocity, specific internal energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalState {
    pub rho: f64,
    pub u: f64,
    pub eps: f64,
}

impl Mesh1D {
    /// Uniform mesh on `domain` whose cell masses come from the density
    /// sampled at each cell center.
    pub fn uniform(domain: Interval, n_cells: usize, density: impl Fn(f64) -> f64) -> Result<Self> {
        let node_x = uniform_nodes(domain, n_cells)?;
        let rho: Vec<f64> = node_x.windows(2).map(|w| density(0.5 * (w[0] + w[1]))).collect();
        Self::from_nodes(node_x, &rho)
    }

    /// Mesh with the given node positions and per-cell densities.
    pub fn from_nodes(node_x: Vec<f64>, rho: &[f64]) -> Result<Self> {
        let n = rho.len();
        if n < 2 || node_x.len() != n + 1 {
            return Err(HydroError::InvalidInput(format!(
                "need at least 2 cells and N+1 nodes, got {n} cells and {} nodes",
                node_x.len()
            )));
        }
        check_ordering(&node_x)?;
        if let Some(j) = rho.iter().position(|r| !r.is_finite() || *r <= 0.0) {
            return Err(HydroError::InvalidInput(format!("initial density {} in cell {j}", rho[j])));
        }
        let cell_mass: Vec<f64> = node_x.windows(2).zip(rho).map(|(w, r)| r * (w[1] - w[0])).collect();
        // The midpoint split gives two equal halves.
        let subcell_mass_left: Vec<f64> = cell_mass.iter().map(|m| 0.5 * m).collect();
        let subcell_mass_right = subcell_mass_left.clone();
        let mut node_mass = vec![0.0; n + 1];
        for j in 0..n {
            node_mass[j] += subcell_mass_left[j];
            node_mass[j + 1] += subcell_mass_right[j];
        }
        Ok(Self {
            node_x,
            cell_mass,
            node_mass,
            subcell_mass_left,
            subcell_mass_right,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.cell_mass.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.node_x.len()
    }

    pub fn cell_volume(&self, j: usize) -> Result<f64> {
        if j >= self.n_cells() {
            return Err(HydroError::InvalidInput(format!("cell index {j} out of range")));
        }
        let v = self.node_x[j + 1] - self.node_x[j];
        if v > 0.0 {
            Ok(v)
        } else {
            Err(HydroError::TangledMesh { step: 0, node: j + 1, prev: j })
        }
    }

    pub fn cell_volumes(&self) -> Vec<f64> {
        self.node_x.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn cell_center(&self, j: usize) -> f64 {
        0.5 * (self.node_x[j] + self.node_x[j + 1])
    }

    pub fn cell_centers(&self) -> Vec<f64> {
        self.node_x.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// `m / V` for every cell.
    pub fn densities(&self) -> Vec<f64> {
        self.node_x
            .windows(2)
            .zip(&self.cell_mass)
            .map(|(w, m)| m / (w[1] - w[0]))
            .collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.cell_mass.iter().sum()
    }

    /// Moves every node with its own velocity, `x += u dt`.
    pub fn advance(&mut self, velocity: &[f64], dt: f64) -> Result<()> {
        if !(dt > 0.0) {
            return Err(HydroError::InvalidInput(format!("time step must be positive, got {dt}")));
        }
        if velocity.len() != self.n_nodes() {
            return Err(HydroError::InvalidInput(format!(
                "{} node velocities for {} nodes",
                velocity.len(),
                self.n_nodes()
            )));
        }
        let moved: Vec<f64> = self.node_x.iter().zip(velocity).map(|(x, u)| x + u * dt).collect();
        check_ordering(&moved)?;
        self.node_x = moved;
        Ok(())
    }
}

fn uniform_nodes(domain: Interval, n_cells: usize) -> Result<Vec<f64>> {
    if n_cells < 2 {
        return Err(HydroError::InvalidInput(format!("need at least 2 cells, got {n_cells}")));
    }
    if !(domain.lo.is_finite() && domain.hi.is_finite() && domain.hi > domain.lo) {
        return Err(HydroError::InvalidInput(format!(
            "empty or non-finite domain [{}, {}]",
            domain.lo, domain.hi
        )));
    }
    let len = domain.length();
    Ok((0..=n_cells)
        .map(|j| if j == n_cells { domain.hi } else { domain.lo + len * j as f64 / n_cells as f64 })
        .collect())
}

fn check_ordering(x: &[f64]) -> Result<()> {
    for j in 1..x.len() {
        if !(x[j] > x[j - 1]) {
            return Err(HydroError::TangledMesh { step: 0, node: j, prev: j - 1 });
        }
    }
    Ok(())
}

/// Sound-crossing time `l / c` of a cell.
pub fn characteristic_time(length: f64, c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(HydroError::InvalidInput(format!("sound speed must be positive, got {c}")));
    }
    if !(length > 0.0) {
        return Err(HydroError::InvalidInput(format!("length must be positive, got {length}")));
    }
    Ok(length / c)
}

/// Staggered layout: velocity on nodes, thermodynamics in cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SghState {
    pub node_u: Vec<f64>,
    pub rho: Vec<f64>,
    pub eps: Vec<f64>,
    pub p: Vec<f64>,
    pub c: Vec<f64>,
}

/// Cell-centered layout: every conserved quantity lives in the cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CchState {
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub e_total: Vec<f64>,
    pub eps: Vec<f64>,
    pub p: Vec<f64>,
    pub c: Vec<f64>,
}

fn check_cells(mesh: &Mesh1D, cells: &[LocalState]) -> Result<()> {
    if cells.len() != mesh.n_cells() {
        return Err(HydroError::InvalidInput(format!(
            "{} initial states for {} cells",
            cells.len(),
            mesh.n_cells()
        )));
    }
    for (j, s) in cells.iter().enumerate() {
        if !(s.rho.is_finite() && s.u.is_finite() && s.eps.is_finite()) {
            return Err(HydroError::InvalidInput(format!("non-finite initial data in cell {j}: {s:?}")));
        }
        if s.eps < 0.0 {
            return Err(HydroError::InvalidInput(format!("negative internal energy in cell {j}")));
        }
    }
    Ok(())
}

impl SghState {
    /// Node velocities are the mass-weighted average of the two sub-cells
    /// sharing the node, so the nodal momentum equals the cell momentum.
    pub fn from_cells(mesh: &Mesh1D, gas: &IdealGas, cells: &[LocalState]) -> Result<Self> {
        check_cells(mesh, cells)?;
        let n = mesh.n_cells();
        let mut node_u = vec![0.0; n + 1];
        for j in 0..n {
            node_u[j] += mesh.subcell_mass_left[j] * cells[j].u;
            node_u[j + 1] += mesh.subcell_mass_right[j] * cells[j].u;
        }
        for (u, m) in node_u.iter_mut().zip(&mesh.node_mass) {
            *u /= m;
        }
        let rho = mesh.densities();
        let eps: Vec<f64> = cells.iter().map(|s| s.eps).collect();
        let mut state = Self {
            node_u,
            rho,
            eps,
            p: vec![0.0; n],
            c: vec![0.0; n],
        };
        state.refresh_thermo(gas)?;
        Ok(state)
    }

    pub(crate) fn refresh_thermo(&mut self, gas: &IdealGas) -> Result<()> {
        for j in 0..self.rho.len() {
            self.p[j] = gas.pressure(self.rho[j], self.eps[j])?;
            self.c[j] = gas.sound_speed(self.rho[j], self.p[j])?;
        }
        Ok(())
    }

    /// Cell velocity as the average of its two nodes (used for output).
    pub fn cell_velocity(&self) -> Vec<f64> {
        self.node_u.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

impl CchState {
    pub fn from_cells(mesh: &Mesh1D, gas: &IdealGas, cells: &[LocalState]) -> Result<Self> {
        check_cells(mesh, cells)?;
        let n = mesh.n_cells();
        let mut state = Self {
            rho: mesh.densities(),
            u: cells.iter().map(|s| s.u).collect(),
            e_total: cells.iter().map(|s| s.eps + 0.5 * s.u * s.u).collect(),
            eps: cells.iter().map(|s| s.eps).collect(),
            p: vec![0.0; n],
            c: vec![0.0; n],
        };
        state.refresh_thermo(gas)?;
        Ok(state)
    }

    pub(crate) fn refresh_thermo(&mut self, gas: &IdealGas) -> Result<()> {
        for j in 0..self.rho.len() {
            self.p[j] = gas.pressure(self.rho[j], self.eps[j])?;
            self.c[j] = gas.sound_speed(self.rho[j], self.p[j])?;
        }
        Ok(())
    }
}

/// Uniform mesh plus staggered state from a pointwise initial condition.
pub fn build_sgh(
    domain: Interval,
    n_cells: usize,
    gas: &IdealGas,
    init: impl Fn(f64) -> LocalState,
) -> Result<(Mesh1D, SghState)> {
    let (mesh, cells) = sample(domain, n_cells, init)?;
    let state = SghState::from_cells(&mesh, gas, &cells)?;
    Ok((mesh, state))
}

/// Uniform mesh plus cell-centered state from a pointwise initial condition.
pub fn build_cch(
    domain: Interval,
    n_cells: usize,
    gas: &IdealGas,
    init: impl Fn(f64) -> LocalState,
) -> Result<(Mesh1D, CchState)> {
    let (mesh, cells) = sample(domain, n_cells, init)?;
    let state = CchState::from_cells(&mesh, gas, &cells)?;
    Ok((mesh, state))
}

fn sample(domain: Interval, n_cells: usize, init: impl Fn(f64) -> LocalState) -> Result<(Mesh1D, Vec<LocalState>)> {
    let node_x = uniform_nodes(domain, n_cells)?;
    let cells: Vec<LocalState> = node_x.windows(2).map(|w| init(0.5 * (w[0] + w[1]))).collect();
    for (j, s) in cells.iter().enumerate() {
        if !(s.rho.is_finite() && s.u.is_finite() && s.eps.is_finite()) {
            return Err(HydroError::InvalidInput(format!("non-finite initial data in cell {j}")));
        }
    }
    let rho: Vec<f64> = cells.iter().map(|s| s.rho).collect();
    let mesh = Mesh1D::from_nodes(node_x, &rho)?;
    Ok((mesh, cells))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize) -> Mesh1D {
        Mesh1D::uniform(Interval::new(0.0, 1.0), n, |_| 1.0).unwrap()
    }

    #[test]
    fn uniform_density_masses() {
        let mesh = unit(10);
        for m in &mesh.cell_mass {
            assert!((m - 0.1).abs() < 1e-15);
        }
        assert!((mesh.node_mass[0] - 0.05).abs() < 1e-15);
        assert!((mesh.node_mass[10] - 0.05).abs() < 1e-15);
        for m in &mesh.node_mass[1..10] {
            assert!((m - 0.1).abs() < 1e-15);
        }
        assert!((mesh.total_mass() - mesh.node_mass.iter().sum::<f64>()).abs() < 1e-15);
        for j in 1..10 {
            assert_eq!(mesh.node_mass[j], mesh.subcell_mass_right[j - 1] + mesh.subcell_mass_left[j]);
        }
    }

    #[test]
    fn sod_two_cells() {
        let mesh = Mesh1D::uniform(Interval::new(0.0, 1.0), 2, |x| if x < 0.5 { 1.0 } else { 0.125 }).unwrap();
        assert_eq!(mesh.cell_mass, vec![0.5, 0.0625]);
    }

    #[test]
    fn rejects_bad_builds() {
        assert!(Mesh1D::uniform(Interval::new(0.0, 1.0), 1, |_| 1.0).is_err());
        assert!(Mesh1D::uniform(Interval::new(1.0, 1.0), 4, |_| 1.0).is_err());
        assert!(Mesh1D::uniform(Interval::new(0.0, 1.0), 4, |_| f64::NAN).is_err());
        let gas = IdealGas::new(1.4).unwrap();
        let bad = build_sgh(Interval::new(0.0, 1.0), 4, &gas, |_| LocalState { rho: 1.0, u: f64::NAN, eps: 1.0 });
        assert!(bad.is_err());
    }

    #[test]
    fn cell_volume_examples() {
        let mesh = Mesh1D::from_nodes(vec![0.0, 0.1, 0.2], &[1.0, 1.0]).unwrap();
        assert_eq!(mesh.cell_volume(0).unwrap(), 0.1);
        let mut mesh = Mesh1D::from_nodes(vec![0.0, 0.2, 0.5], &[1.0, 1.0]).unwrap();
        assert!((mesh.cell_volume(1).unwrap() - 0.3).abs() < 1e-15);
        mesh.node_x[2] = 0.2;
        assert!(matches!(mesh.cell_volume(1), Err(HydroError::TangledMesh { .. })));
        assert!(Mesh1D::from_nodes(vec![0.0, 0.3, 0.3], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn characteristic_time_examples() {
        assert_eq!(characteristic_time(0.1, 1.0).unwrap(), 0.1);
        assert_eq!(characteristic_time(1.0, 2.0).unwrap(), 0.5);
        let t = characteristic_time(0.04, 1.1832159566).unwrap();
        assert!((t - 0.033806).abs() < 1e-6);
        assert!(characteristic_time(0.1, 0.0).is_err());
        assert!(characteristic_time(0.1, -1.0).is_err());
    }

    #[test]
    fn advance_examples() {
        let mut mesh = Mesh1D::from_nodes(vec![0.0, 0.5, 1.0], &[1.0, 1.0]).unwrap();
        let before = mesh.clone();
        mesh.advance(&[0.0; 3], 0.7).unwrap();
        assert_eq!(mesh, before);

        mesh.advance(&[1.0; 3], 0.1).unwrap();
        assert_eq!(mesh.node_x[0], 0.1);
        assert_eq!(mesh.node_x[2], 1.1);

        let mut mesh = Mesh1D::from_nodes(vec![0.0, 0.5, 1.0], &[1.0, 1.0]).unwrap();
        assert!(matches!(
            mesh.advance(&[1.0, 0.0, -1.0], 0.6),
            Err(HydroError::TangledMesh { .. })
        ));
        assert!(mesh.advance(&[0.0; 3], 0.0).is_err());
    }

    #[test]
    fn density_times_volume_is_mass() {
        let mut mesh = Mesh1D::uniform(Interval::new(-1.0, 2.0), 37, |x| 1.0 + 0.3 * (4.0 * x).sin()).unwrap();
        let u: Vec<f64> = mesh.node_x.iter().map(|x| 0.2 * (3.0 * x).cos()).collect();
        mesh.advance(&u, 0.05).unwrap();
        for ((r, v), m) in mesh.densities().iter().zip(mesh.cell_volumes()).zip(&mesh.cell_mass) {
            assert!((r * v - m).abs() <= 1e-14 * m);
        }
    }

    #[test]
    fn node_velocity_is_momentum_weighted() {
        let gas = IdealGas::new(1.4).unwrap();
        let (mesh, st) = build_sgh(Interval::new(0.0, 1.0), 4, &gas, |x| LocalState {
            rho: 1.0,
            u: if x < 0.5 { -2.0 } else { 2.0 },
            eps: 1.0,
        })
        .unwrap();
        assert_eq!(st.node_u, vec![-2.0, -2.0, 0.0, 2.0, 2.0]);
        let p_nodes: f64 = mesh.node_mass.iter().zip(&st.node_u).map(|(m, u)| m * u).sum();
        assert_eq!(p_nodes, 0.0);
    }
}
