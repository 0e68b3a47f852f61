//! Conservation and entropy audits, error norms and convergence orders.

use crate::boundary::BoundaryFlux;
use crate::error::{HydroError, Result};

/// Domain totals at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Totals {
    pub mass: f64,
    pub momentum: f64,
    /// `sum m |u|`, the scale momentum drifts are measured against.
    pub momentum_abs: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conserved {
    Mass,
    Momentum,
    Energy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerViolation {
    pub step: usize,
    pub quantity: Conserved,
    pub relative_residual: f64,
}

/// Running balance of mass, momentum and energy against the boundary
/// impulse and work.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationLedger {
    pub initial: Totals,
    pub current: Totals,
    /// Accumulated `dt p u`-type fluxes, signed as contributions into the
    /// domain.
    pub impulse_left: f64,
    pub impulse_right: f64,
    pub work_left: f64,
    pub work_right: f64,
    momentum_scale: f64,
    energy_scale: f64,
    pub tolerance: f64,
    pub max_momentum_residual: f64,
    pub max_energy_residual: f64,
    pub violations: Vec<LedgerViolation>,
    pub steps: usize,
}

impl ConservationLedger {
    pub const DEFAULT_TOLERANCE: f64 = 1e-10;

    pub fn new(initial: Totals, tolerance: f64) -> Self {
        Self {
            initial,
            current: initial,
            impulse_left: 0.0,
            impulse_right: 0.0,
            work_left: 0.0,
            work_right: 0.0,
            momentum_scale: initial.momentum_abs,
            energy_scale: initial.energy.abs(),
            tolerance,
            max_momentum_residual: 0.0,
            max_energy_residual: 0.0,
            violations: Vec::new(),
            steps: 0,
        }
    }

    pub fn mass_drift(&self) -> f64 {
        self.current.mass - self.initial.mass
    }

    pub fn momentum_drift(&self) -> f64 {
        self.current.momentum - self.initial.momentum
    }

    pub fn energy_drift(&self) -> f64 {
        self.current.energy - self.initial.energy
    }

    pub fn boundary_impulse(&self) -> f64 {
        self.impulse_left + self.impulse_right
    }

    pub fn boundary_work(&self) -> f64 {
        self.work_left + self.work_right
    }

    /// `|momentum drift - boundary impulse|` over the momentum scale.
    pub fn momentum_residual(&self) -> f64 {
        relative(self.momentum_drift() - self.boundary_impulse(), self.momentum_scale)
    }

    /// `|energy drift - boundary work|` over the energy scale.
    pub fn energy_residual(&self) -> f64 {
        relative(self.energy_drift() - self.boundary_work(), self.energy_scale)
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Books one step: the boundary star values acting over `dt` and the
    /// totals after the step.
    pub fn audit_step(&mut self, after: Totals, flux: &BoundaryFlux, dt: f64) -> Result<()> {
        if !(dt > 0.0) {
            return Err(HydroError::InvalidInput(format!("audit with dt = {dt}")));
        }
        self.steps += 1;
        self.impulse_left += dt * flux.left_pressure;
        self.impulse_right -= dt * flux.right_pressure;
        self.work_left += dt * flux.left_pressure * flux.left_velocity;
        self.work_right -= dt * flux.right_pressure * flux.right_velocity;
        self.current = after;
        self.momentum_scale = self
            .momentum_scale
            .max(after.momentum_abs)
            .max(self.impulse_left.abs() + self.impulse_right.abs());
        self.energy_scale = self
            .energy_scale
            .max(after.energy.abs())
            .max(self.work_left.abs() + self.work_right.abs());

        let step = self.steps;
        if self.mass_drift() != 0.0 {
            self.violations.push(LedgerViolation {
                step,
                quantity: Conserved::Mass,
                relative_residual: relative(self.mass_drift(), self.initial.mass),
            });
        }
        let m = self.momentum_residual();
        self.max_momentum_residual = self.max_momentum_residual.max(m);
        if !(m <= self.tolerance) {
            self.violations.push(LedgerViolation { step, quantity: Conserved::Momentum, relative_residual: m });
        }
        let e = self.energy_residual();
        self.max_energy_residual = self.max_energy_residual.max(e);
        if !(e <= self.tolerance) {
            self.violations.push(LedgerViolation { step, quantity: Conserved::Energy, relative_residual: e });
        }
        Ok(())
    }
}

fn relative(residual: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        residual.abs() / scale
    } else {
        residual.abs()
    }
}

/// `(p - p*) du` for a staggered cell.
pub fn entropy_production_sgh(p: f64, p_star: f64, du: f64) -> f64 {
    (p - p_star) * du
}

/// Production in a cell-centered cell from the star values at its two
/// nodes: `(P - P*_r)(u*_r - u) + (P - P*_l)(u - u*_l)`.
pub fn entropy_production_cch(p: f64, u: f64, left: (f64, f64), right: (f64, f64)) -> f64 {
    let (u_l, p_l) = left;
    let (u_r, p_r) = right;
    (p - p_r) * (u_r - u) + (p - p_l) * (u - u_l)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEvent {
    pub step: usize,
    pub cell: usize,
    pub production: f64,
    pub scale: f64,
}

/// Watches the per-cell production and the ideal-gas entropy monitor
/// `ln(p tau^gamma)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyMonitor {
    /// Production may dip to `-tolerance * scale` from round-off.
    pub tolerance: f64,
    pub steps: usize,
    /// Most negative `production / scale` seen.
    pub min_normalized: f64,
    pub violations: Vec<EntropyEvent>,
    /// Nonzero production in cells with `du >= 0` (staggered runs only).
    pub isentropic_breaches: usize,
    pub monitor_initial: Vec<f64>,
    pub monitor: Vec<f64>,
}

impl EntropyMonitor {
    pub const DEFAULT_TOLERANCE: f64 = 1e-12;
    const MAX_EVENTS: usize = 64;

    pub fn new(monitor: Vec<f64>, tolerance: f64) -> Self {
        Self {
            tolerance,
            steps: 0,
            min_normalized: 0.0,
            violations: Vec::new(),
            isentropic_breaches: 0,
            monitor_initial: monitor.clone(),
            monitor,
        }
    }

    pub fn violation_count(&self) -> usize {
        self.violations.len()
    }

    pub fn record(&mut self, production: &[f64], scale: &[f64]) {
        self.steps += 1;
        for (j, (&p, &s)) in production.iter().zip(scale).enumerate() {
            if s > 0.0 {
                self.min_normalized = self.min_normalized.min(p / s);
            }
            if !(p >= -self.tolerance * s) && self.violations.len() < Self::MAX_EVENTS {
                self.violations.push(EntropyEvent { step: self.steps, cell: j, production: p, scale: s });
            }
        }
    }

    /// Production must vanish exactly wherever the cell does not compress.
    pub fn record_expansion(&mut self, production: &[f64], du: &[f64]) {
        self.isentropic_breaches += production.iter().zip(du).filter(|(p, d)| **d >= 0.0 && **p != 0.0).count();
    }

    pub fn update_monitor(&mut self, monitor: Vec<f64>) {
        self.monitor = monitor;
    }
}

/// `sum V |q - r| / sum V`.
pub fn l1_error(numerical: &[f64], reference: &[f64], volumes: &[f64]) -> Result<f64> {
    if numerical.len() != reference.len() || numerical.len() != volumes.len() {
        return Err(HydroError::InvalidInput(format!(
            "profile lengths differ: {} / {} / {}",
            numerical.len(),
            reference.len(),
            volumes.len()
        )));
    }
    let total: f64 = volumes.iter().sum();
    if !(total > 0.0) {
        return Err(HydroError::InvalidInput("empty or degenerate volume sample".into()));
    }
    let sum: f64 = numerical
        .iter()
        .zip(reference)
        .zip(volumes)
        .map(|((q, r), v)| v * (q - r).abs())
        .sum();
    Ok(sum / total)
}

/// Least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Observed order `-d log(error) / d log(N)`; `None` with fewer than two
/// resolutions.
pub fn convergence_order(cells: &[usize], errors: &[f64]) -> Option<f64> {
    if cells.len() < 2 || cells.len() != errors.len() {
        return None;
    }
    let xs: Vec<f64> = cells.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let slope = -least_squares_slope(&xs, &ys);
    Some(if slope == 0.0 { 0.0 } else { slope })
}

/// Piecewise-linear interpolation of `(xs, ys)` at `x`, constant beyond
/// the ends. `xs` must be increasing.
pub fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let i = xs.partition_point(|&v| v <= x);
    let (x0, x1) = (xs[i - 1], xs[i]);
    let w = (x - x0) / (x1 - x0);
    ys[i - 1] + w * (ys[i] - ys[i - 1])
}

/// Local extrema of `values` that stand out from both neighbours' running
/// extremes by more than `threshold` (hysteresis counting).
pub fn count_extrema(values: &[f64], threshold: f64) -> usize {
    if values.len() < 3 {
        return 0;
    }
    let mut count = 0;
    // +1 while rising, -1 while falling, 0 before a direction is set.
    let mut direction = 0i8;
    let mut pivot = values[0];
    for &v in &values[1..] {
        match direction {
            0 => {
                if v > pivot + threshold {
                    direction = 1;
                    pivot = v;
                } else if v < pivot - threshold {
                    direction = -1;
                    pivot = v;
                }
            }
            1 => {
                if v > pivot {
                    pivot = v;
                } else if v < pivot - threshold {
                    count += 1;
                    direction = -1;
                    pivot = v;
                }
            }
            _ => {
                if v < pivot {
                    pivot = v;
                } else if v > pivot + threshold {
                    count += 1;
                    direction = 1;
                    pivot = v;
                }
            }
        }
    }
    count
}
