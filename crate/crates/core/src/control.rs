//! Drive schedule `Ω(t)`, its phase `Φ(t) = ∫₀ᵗ Ω` and the rotating
//! decoupling axis `Λ(t) = ẑ cos 2Φ + ŷ sin 2Φ`.
//!
//! Only constant drives are supported. The gate angle `π/4` maps the logical
//! state |1⟩ onto the √SWAP target after one unit of time, and adding `2nπ`
//! leaves the ideal gate unchanged while averaging out the bath (continuous
//! dynamical decoupling).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PulseSpec {
    Off,
    ConstantGate,
    Cdd(i64),
}

impl PulseSpec {
    /// Drive frequency in rad/τ. Constant in time for every supported kind.
    pub fn rate(&self) -> f64 {
        match *self {
            PulseSpec::Off => 0.0,
            PulseSpec::ConstantGate => PI / 4.0,
            PulseSpec::Cdd(n) => PI / 4.0 + 2.0 * n as f64 * PI,
        }
    }

    /// Angular frequency `2Ω` at which `Λ(t)` rotates.
    pub fn axis_rate(&self) -> f64 {
        2.0 * self.rate()
    }
}

impl fmt::Display for PulseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PulseSpec::Off => f.write_str("off"),
            PulseSpec::ConstantGate => f.write_str("gate"),
            PulseSpec::Cdd(n) => write!(f, "cdd:{n}"),
        }
    }
}

impl FromStr for PulseSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "off" => Ok(PulseSpec::Off),
            "gate" => Ok(PulseSpec::ConstantGate),
            _ => {
                let n = s
                    .strip_prefix("cdd:")
                    .ok_or_else(|| Error::Parse(format!("pulse must be off, gate or cdd:<n>, got {s:?}")))?;
                n.trim()
                    .parse::<i64>()
                    .map(PulseSpec::Cdd)
                    .map_err(|_| Error::Parse(format!("cdd harmonic must be an integer, got {n:?}")))
            }
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::domain("t", t, "time must lie in [0, 1]"))
    }
}

pub fn omega(pulse: &PulseSpec, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(pulse.rate())
}

pub fn phase(pulse: &PulseSpec, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(pulse.rate() * t)
}

pub fn lambda_axis(pulse: &PulseSpec, t: f64) -> Result<Vector3<f64>> {
    check_time(t)?;
    Ok(axis_at(pulse, t))
}

/// `Λ(t)` without the domain check; used on internal grids.
pub(crate) fn axis_at(pulse: &PulseSpec, t: f64) -> Vector3<f64> {
    let (s, c) = (pulse.axis_rate() * t).sin_cos();
    Vector3::new(0.0, s, c)
}
