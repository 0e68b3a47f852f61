//! Pressure–velocity closures shared by both discretizations.
//!
//! Everything here starts from the quadratic expansion of pressure in
//! specific volume about a cell state,
//!
//! ```text
//! p(tau) = p0 - rho0^2 c0^2 (tau - tau0) + (gamma+1)/2 rho0^3 c0^2 (tau - tau0)^2
//! ```
//!
//! and converts the specific-volume change into a velocity jump using the
//! sound-crossing time of the (sub-)cell, `d tau = d u / (rho c)`. The
//! staggered scheme uses it per cell as a star pressure; the cell-centered
//! scheme balances the two one-sided expressions at each node.

use serde::{Deserialize, Serialize};

use crate::eos::{IdealGas, ThermoState};
use crate::error::{HydroError, Result};

/// Cell state adjacent to a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellFace {
    pub rho: f64,
    pub c: f64,
    pub p: f64,
    pub u: f64,
}

impl CellFace {
    #[inline]
    pub fn impedance(&self) -> f64 {
        self.rho * self.c
    }
}

/// Which nodal relation produced a [`NodalSolution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverOrder {
    Acoustic,
    Quadratic,
}

/// Node velocity plus the star pressure seen by the cell on each side.
///
/// `p_star_left` acts on the cell to the left of the node, `p_star_right`
/// on the cell to the right. Force balance makes them equal; the update
/// uses their mean through [`NodalSolution::pressure`] so that both
/// neighbours see one value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodalSolution {
    pub u_star: f64,
    pub p_star_left: f64,
    pub p_star_right: f64,
    pub order: SolverOrder,
}

impl NodalSolution {
    #[inline]
    pub fn pressure(&self) -> f64 {
        if self.p_star_left == self.p_star_right {
            self.p_star_left
        } else {
            0.5 * (self.p_star_left + self.p_star_right)
        }
    }
}

/// Quadratic expansion of pressure about `reference` for a change
/// `delta_tau` in specific volume.
pub fn taylor_pressure(delta_tau: f64, reference: &ThermoState, gamma: f64) -> f64 {
    let ThermoState { rho, c, p, .. } = *reference;
    let rc2 = rho * rho * c * c;
    p - rc2 * delta_tau + 0.5 * (gamma + 1.0) * rho * rc2 * delta_tau * delta_tau
}

/// Star pressure of a staggered cell with node velocity jump
/// `du = u_{j+1} - u_j`.
///
/// Compression picks up the linear-plus-quadratic correction; expansion
/// keeps the cell pressure so smooth flow produces no entropy.
#[inline]
pub fn sgh_star_pressure(rho: f64, c: f64, p: f64, du: f64, gas: &IdealGas) -> f64 {
    if du < 0.0 {
        p - rho * c * du + gas.half_gamma_plus_one() * rho * du * du
    } else {
        p
    }
}

/// Linearized (acoustic) nodal solve between two cells.
pub fn cch_acoustic(left: &CellFace, right: &CellFace) -> NodalSolution {
    let zl = left.impedance();
    let zr = right.impedance();
    let zsum = zl + zr;
    let u_star = (zl * left.u + zr * right.u + left.p - right.p) / zsum;
    let p_star = (zr * left.p + zl * right.p) / zsum - zl * zr * (right.u - left.u) / zsum;
    NodalSolution {
        u_star,
        p_star_left: p_star,
        p_star_right: p_star,
        order: SolverOrder::Acoustic,
    }
}

/// Pressure felt by the cell left of a node moving at `u_star`.
#[inline]
pub fn left_side_pressure(face: &CellFace, u_star: f64, k: f64, quadratic: bool) -> f64 {
    let d = u_star - face.u;
    let lin = face.p - face.impedance() * d;
    if quadratic {
        lin + k * face.rho * d * d
    } else {
        lin
    }
}

/// Pressure felt by the cell right of a node moving at `u_star`.
#[inline]
pub fn right_side_pressure(face: &CellFace, u_star: f64, k: f64, quadratic: bool) -> f64 {
    let d = u_star - face.u;
    let lin = face.p + face.impedance() * d;
    if quadratic {
        lin + k * face.rho * d * d
    } else {
        lin
    }
}

/// Entropy admissibility of the quadratic relation on one side of a node.
///
/// `expansion` is the rate at which the node opens the sub-cell
/// (`u* - u_L` for the left cell, `u_R - u*` for the right one). The
/// side's entropy production is `z e^2 - k rho e^3`, which can only turn
/// negative when the sub-cell expands, so compression always passes.
#[inline]
pub fn quadratic_admissible(face: &CellFace, expansion: f64, k: f64) -> bool {
    face.impedance() * expansion * expansion >= k * face.rho * expansion * expansion * expansion
}

/// Quadratic nodal solve: balances the two one-sided quadratic pressure
/// relations at the node and falls back to `fallback` (the acoustic
/// solution for the same faces) when the quadratic has no suitable root
/// or the root is not entropy-admissible.
pub fn cch_quadratic(
    left: &CellFace,
    right: &CellFace,
    gas: &IdealGas,
    fallback: NodalSolution,
) -> Result<NodalSolution> {
    let k = gas.half_gamma_plus_one();
    // Solved for the offset w = u* - u_L so that round-off scales with the
    // velocity jump rather than with the velocities themselves.
    let (rl, pl, zl) = (left.rho, left.p, left.impedance());
    let (rr, pr, zr) = (right.rho, right.p, right.impedance());
    let du = right.u - left.u;
    let a = k * (rl - rr);
    let b = (gas.gamma + 1.0) * rr * du - zl - zr;
    let c = pl - pr + zr * du - k * rr * du * du;
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(HydroError::Unphysical(format!(
            "non-finite nodal quadratic coefficients a={a}, b={b}, c={c}"
        )));
    }

    let tol_a = 1e-12 * k * rl.max(rr);
    let w = if a.abs() < tol_a {
        if b == 0.0 {
            return Ok(fallback);
        }
        -c / b
    } else {
        let disc = b * b - 4.0 * a * c;
        if !(disc > 0.0) {
            return Ok(fallback);
        }
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        let r1 = q / a;
        let r2 = if q != 0.0 { c / q } else { r1 };
        let target = fallback.u_star - left.u;
        if (r1 - target).abs() <= (r2 - target).abs() {
            r1
        } else {
            r2
        }
    };
    if !w.is_finite() {
        return Ok(fallback);
    }
    let (el, er) = (w, w - du);
    if !quadratic_admissible(left, el, k) || !quadratic_admissible(right, -er, k) {
        return Ok(fallback);
    }
    Ok(NodalSolution {
        u_star: left.u + w,
        p_star_left: pl - zl * el + k * rl * el * el,
        p_star_right: pr + zr * er + k * rr * er * er,
        order: SolverOrder::Quadratic,
    })
}
