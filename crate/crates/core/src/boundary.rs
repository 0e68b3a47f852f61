//! Boundary conditions and the per-step boundary fluxes they produce.

use serde::{Deserialize, Serialize};

use crate::error::{HydroError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryCondition {
    /// Zero-gradient ghost state.
    Transmissive,
    /// Rigid wall, equivalent to a prescribed velocity of zero.
    Wall,
    PrescribedVelocity { u: f64 },
    PrescribedPressure { p: f64 },
}

impl BoundaryCondition {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            BoundaryCondition::PrescribedVelocity { u } => u.is_finite(),
            BoundaryCondition::PrescribedPressure { p } => p.is_finite() && p >= 0.0,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(HydroError::InvalidInput(format!("invalid boundary value in {self:?}")))
        }
    }

    /// Velocity imposed on the boundary node, if any.
    pub fn prescribed_velocity(&self) -> Option<f64> {
        match *self {
            BoundaryCondition::Wall => Some(0.0),
            BoundaryCondition::PrescribedVelocity { u } => Some(u),
            _ => None,
        }
    }
}

/// Pressure and velocity acting on the two boundary nodes during a step.
///
/// Multiplied by `dt` these give the momentum impulse and the work done
/// on the system through each end of the domain.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundaryFlux {
    pub left_pressure: f64,
    pub left_velocity: f64,
    pub right_pressure: f64,
    pub right_velocity: f64,
}

impl BoundaryFlux {
    /// Net momentum added to the domain.
    pub fn impulse(&self, dt: f64) -> f64 {
        dt * (self.left_pressure - self.right_pressure)
    }

    /// Net energy added to the domain.
    pub fn work(&self, dt: f64) -> f64 {
        dt * (self.left_pressure * self.left_velocity - self.right_pressure * self.right_velocity)
    }
}

/// Conditions at the two ends of the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boundaries {
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
}

impl Boundaries {
    pub const TRANSMISSIVE: Boundaries = Boundaries {
        left: BoundaryCondition::Transmissive,
        right: BoundaryCondition::Transmissive,
    };

    pub fn new(left: BoundaryCondition, right: BoundaryCondition) -> Self {
        Self { left, right }
    }
}
