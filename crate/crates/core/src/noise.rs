//! Ohmic bath and its two correlation kernels.
//!
//! The bath enters the dynamics only through the continuum kernels
//!
//! ```text
//! I₁(t) = ∫ dω J(ω) n(ω) e^{iωt}  = η T² ψ⁽¹⁾(1 + T/ω_c − i t T)
//! I₂(t) = ∫ dω J(ω) e^{iωt}       = η ω_c² / (1 − i ω_c t)²
//! ```
//!
//! with `J(ω) = η ω e^{−ω/ω_c}`, `n(ω)` the Bose occupation and `T = k_B T/ħ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfn;
use crate::C64;

/// Ohmic environment: strength `eta`, cutoff `omega_c` (rad/τ) and
/// temperature `beta_inv = k_B T / ħ` (1/τ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub eta: f64,
    pub omega_c: f64,
    pub beta_inv: f64,
}

impl BathSpec {
    pub fn new(eta: f64, omega_c: f64, beta_inv: f64) -> Result<Self> {
        let bath = BathSpec { eta, omega_c, beta_inv };
        bath.validate()?;
        Ok(bath)
    }

    /// Builds a bath from the configuration-file units: `ω_c / π` and the
    /// temperature in units of `ħ ω_c / k_B`.
    pub fn from_cutoff_units(eta: f64, omega_c_over_pi: f64, temperature_in_cutoff_units: f64) -> Result<Self> {
        let omega_c = omega_c_over_pi * PI;
        Self::new(eta, omega_c, temperature_in_cutoff_units * omega_c)
    }

    /// `ω_c = 8π/τ`, `k_B T = ħ ω_c`.
    pub fn canonical(eta: f64) -> Self {
        BathSpec {
            eta,
            omega_c: 8.0 * PI,
            beta_inv: 8.0 * PI,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta >= 0.0) || !self.eta.is_finite() {
            return Err(Error::domain("eta", self.eta, "noise strength must be finite and >= 0"));
        }
        if !(self.omega_c > 0.0) || !self.omega_c.is_finite() {
            return Err(Error::domain("omega_c", self.omega_c, "cutoff must be finite and > 0"));
        }
        if !(self.beta_inv > 0.0) || !self.beta_inv.is_finite() {
            return Err(Error::domain("temperature", self.beta_inv, "temperature must be finite and > 0"));
        }
        Ok(())
    }

    /// `k_B T / (ħ ω_c)`.
    pub fn temperature_in_cutoff_units(&self) -> f64 {
        self.beta_inv / self.omega_c
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }
}

pub fn spectral_density(bath: &BathSpec, omega: f64) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::domain("omega", omega, "frequency must be >= 0"));
    }
    Ok(bath.eta * omega * (-omega / bath.omega_c).exp())
}

/// Thermal kernel `I₁(t)`.
pub fn kernel_i1(bath: &BathSpec, t: f64) -> C64 {
    if bath.eta == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let b = bath.beta_inv;
    let z = C64::new(1.0 + b / bath.omega_c, -t * b);
    // Re(z) > 1 for every valid bath, so no pole can be hit.
    let psi = specfn::trigamma(z).expect("kernel argument has Re(z) > 1");
    psi * (bath.eta * b * b)
}

/// Vacuum kernel `I₂(t)`.
pub fn kernel_i2(bath: &BathSpec, t: f64) -> C64 {
    let wc = bath.omega_c;
    let d = C64::new(1.0, -wc * t);
    (d * d).inv() * (bath.eta * wc * wc)
}
