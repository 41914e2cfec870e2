//! Closed-form pure-dephasing solution (no drive).
//!
//! With `Ω = 0` the populations are frozen and the coherence decays as
//! `ρ₁₂(t) = c₁c₂* ξ(t)`, `ξ = e^{𝓟} e^{𝓠}`, where
//!
//! ```text
//! 𝓟(t) = −2η ln(1 + ω_c² t²)
//! 𝓠(t) = 8η [ln|Γ(1 + a + i b t)| − ln Γ(1 + a)],  a = b/ω_c, b = k_B T/ħ
//! ```

use nalgebra::Matrix2;

use crate::dynamics::{BlochVector, DensityMatrix2};
use crate::error::{Error, Result};
use crate::noise::BathSpec;
use crate::specfn;
use crate::C64;

/// Amplitudes of `|ψ₀⟩ = c₁|1⟩ + c₂|2⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherencePair {
    pub c1: C64,
    pub c2: C64,
}

impl CoherencePair {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(c1: C64, c2: C64) -> Result<Self> {
        let n = c1.norm_sqr() + c2.norm_sqr();
        if (n - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::domain("|c1|^2 + |c2|^2", n, "amplitudes must be normalized"));
        }
        Ok(CoherencePair { c1, c2 })
    }

    /// `c₁ = i c₂ = 1/√2`.
    pub fn equal_superposition() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        CoherencePair {
            c1: C64::new(h, 0.0),
            c2: C64::new(0.0, -h),
        }
    }

    pub fn density(&self) -> DensityMatrix2 {
        DensityMatrix2::pure(self.c1, self.c2)
    }

    /// `(2 Re c₁c₂*, −2 Im c₁c₂*, |c₁|² − |c₂|²)`.
    pub fn bloch_vector(&self) -> BlochVector {
        let coh = self.c1 * self.c2.conj();
        BlochVector::new(2.0 * coh.re, -2.0 * coh.im, self.c1.norm_sqr() - self.c2.norm_sqr())
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("t", t, "time must be finite and >= 0"))
    }
}

/// Vacuum part `𝓟(t)`.
pub fn script_p(bath: &BathSpec, t: f64) -> Result<f64> {
    check_time(t)?;
    let x = bath.omega_c * t;
    Ok(-2.0 * bath.eta * (x * x).ln_1p())
}

/// Thermal part `𝓠(t)`.
pub fn script_q(bath: &BathSpec, t: f64) -> Result<f64> {
    check_time(t)?;
    if bath.eta == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let a = bath.temperature_in_cutoff_units();
    let b = bath.beta_inv;
    let shifted = specfn::abs_gamma_sq(C64::new(1.0 + a, b * t))?.ln();
    let origin = specfn::abs_gamma_sq(C64::new(1.0 + a, 0.0))?.ln();
    Ok(4.0 * bath.eta * (shifted - origin))
}

/// Coherence decay factor `ξ(t) ∈ (0, 1]`.
pub fn xi(bath: &BathSpec, t: f64) -> Result<f64> {
    Ok((script_p(bath, t)? + script_q(bath, t)?).exp())
}

pub fn pure_noise_density(pair: &CoherencePair, bath: &BathSpec, t: f64) -> Result<DensityMatrix2> {
    let coh = pair.c1 * pair.c2.conj() * xi(bath, t)?;
    let m = Matrix2::new(
        C64::new(pair.c1.norm_sqr(), 0.0),
        coh,
        coh.conj(),
        C64::new(pair.c2.norm_sqr(), 0.0),
    );
    DensityMatrix2::new(m)
}

/// `F₀(t) = |c₁|⁴ + |c₂|⁴ + 2|c₁|²|c₂|² ξ(t)`.
pub fn pure_noise_fidelity(pair: &CoherencePair, bath: &BathSpec, t: f64) -> Result<f64> {
    let (p1, p2) = (pair.c1.norm_sqr(), pair.c2.norm_sqr());
    Ok(p1 * p1 + p2 * p2 + 2.0 * p1 * p2 * xi(bath, t)?)
}
