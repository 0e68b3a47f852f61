//! Ideal-gas equation of state, plus the shock (Hugoniot) and isentropic
//! pressure curves through a reference state.
//!
//! The two curves are only used as oracles: the solver itself works with
//! the quadratic expansion in [`crate::closure::taylor_pressure`], which
//! shares their value, slope and curvature at the reference point.

use serde::{Deserialize, Serialize};

use crate::error::{HydroError, Result};

/// Polytropic ideal gas, `p = (gamma - 1) rho eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealGas {
    pub gamma: f64,
}

/// Diatomic gas.
pub const GAMMA_DIATOMIC: f64 = 7.0 / 5.0;
/// Monoatomic gas.
pub const GAMMA_MONOATOMIC: f64 = 5.0 / 3.0;

/// A point in the (specific volume, pressure) plane together with the
/// density and sound speed it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoState {
    pub tau: f64,
    pub p: f64,
    pub rho: f64,
    pub c: f64,
}

impl IdealGas {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 1.0 {
            return Err(HydroError::InvalidInput(format!(
                "adiabatic index must be finite and > 1, got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }

    /// `(gamma + 1) / 2`, the coefficient of the quadratic pressure term.
    #[inline]
    pub fn half_gamma_plus_one(&self) -> f64 {
        0.5 * (self.gamma + 1.0)
    }

    pub fn pressure(&self, rho: f64, eps: f64) -> Result<f64> {
        if !rho.is_finite() || !eps.is_finite() {
            return Err(HydroError::Unphysical(format!(
                "non-finite EOS input rho={rho}, eps={eps}"
            )));
        }
        if rho <= 0.0 {
            return Err(HydroError::Unphysical(format!("non-positive density {rho}")));
        }
        Ok((self.gamma - 1.0) * rho * eps)
    }

    /// Specific internal energy that yields pressure `p` at density `rho`.
    pub fn internal_energy(&self, rho: f64, p: f64) -> f64 {
        p / ((self.gamma - 1.0) * rho)
    }

    pub fn sound_speed(&self, rho: f64, p: f64) -> Result<f64> {
        if !(rho > 0.0) || !p.is_finite() {
            return Err(HydroError::Unphysical(format!(
                "sound speed requested for rho={rho}, p={p}"
            )));
        }
        if p < 0.0 {
            return Err(HydroError::Unphysical(format!("negative pressure {p}")));
        }
        Ok((self.gamma * p / rho).sqrt())
    }

    pub fn thermo_state(&self, rho: f64, p: f64) -> Result<ThermoState> {
        let c = self.sound_speed(rho, p)?;
        Ok(ThermoState { tau: 1.0 / rho, p, rho, c })
    }

    /// Lowest specific volume reachable by a single shock from `tau0`.
    pub fn compression_limit(&self, tau0: f64) -> f64 {
        tau0 * (self.gamma - 1.0) / (self.gamma + 1.0)
    }

    /// Pressure on the Hugoniot curve through `reference`, i.e. the closed
    /// ideal-gas solution of
    /// `eps(tau, p) - eps(tau0, p0) + (tau - tau0)(p + p0)/2 = 0`.
    pub fn hugoniot_pressure(&self, tau: f64, reference: &ThermoState) -> Result<f64> {
        let g = self.gamma;
        let tau0 = reference.tau;
        if !(tau > self.compression_limit(tau0)) || !tau.is_finite() {
            return Err(HydroError::InvalidInput(format!(
                "tau={tau} at or below the shock compression limit {}",
                self.compression_limit(tau0)
            )));
        }
        let num = (g + 1.0) * tau0 - (g - 1.0) * tau;
        let den = (g + 1.0) * tau - (g - 1.0) * tau0;
        Ok(reference.p * num / den)
    }

    /// Pressure on the isentrope through `reference`, `p0 (tau0/tau)^gamma`.
    pub fn isentrope_pressure(&self, tau: f64, reference: &ThermoState) -> Result<f64> {
        if !(tau > 0.0) {
            return Err(HydroError::InvalidInput(format!("non-positive specific volume {tau}")));
        }
        Ok(reference.p * (reference.tau / tau).powf(self.gamma))
    }

    /// `ln(p tau^gamma)`: specific entropy up to an affine transformation.
    pub fn entropy_monitor(&self, rho: f64, p: f64) -> f64 {
        (p * rho.powf(-self.gamma)).ln()
    }
}
