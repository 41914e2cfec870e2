//! Complex log-gamma and trigamma.
//!
//! Both functions shift the argument upward with their recurrences until
//! `Re(z) >= 10` and then sum an asymptotic Bernoulli series. The series is
//! cut after the `B₂₀` term, or earlier at the first term that grows in
//! magnitude.

use crate::error::{Error, Result};
use crate::C64;

const SHIFT_THRESHOLD: f64 = 10.0;

/// `B₂ₖ / (2k (2k − 1))` for k = 1..10 (Stirling series of ln Γ).
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// `B₂ₖ` for k = 1..10 (asymptotic series of ψ⁽¹⁾).
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

fn check_argument(z: C64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain("z", if z.re.is_finite() { z.im } else { z.re }, "must be finite"));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok(())
}

/// Sums `Σ cₖ w^(2k−1)` style tails, stopping at the first term that grows.
fn asymptotic_tail(coeffs: &[f64], first_power: C64, step: C64) -> C64 {
    let mut power = first_power;
    let mut sum = C64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    for &c in coeffs {
        let term = power * c;
        let size = term.norm();
        if size > last {
            break;
        }
        sum += term;
        last = size;
        power *= step;
    }
    sum
}

/// Principal branch of `ln Γ(z)`, continuous on the plane cut along the
/// non-positive real axis.
pub fn log_gamma(z: C64) -> Result<C64> {
    check_argument(z)?;
    let mut w = z;
    let mut shift = C64::new(0.0, 0.0);
    while w.re < SHIFT_THRESHOLD {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let stirling = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * std::f64::consts::PI).ln() + asymptotic_tail(&STIRLING, inv, inv * inv);
    Ok(stirling - shift)
}

/// First polygamma function `ψ⁽¹⁾(z) = Σₖ (z + k)⁻²`.
pub fn trigamma(z: C64) -> Result<C64> {
    check_argument(z)?;
    let mut w = z;
    let mut shift = C64::new(0.0, 0.0);
    while w.re < SHIFT_THRESHOLD {
        shift += (w * w).inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let series = inv + 0.5 * inv2 + asymptotic_tail(&BERNOULLI, inv2 * inv, inv2);
    Ok(shift + series)
}

/// `|Γ(z)|²`, evaluated through the log-magnitude so it cannot overflow
/// before the exponential.
pub fn abs_gamma_sq(z: C64) -> Result<f64> {
    Ok((2.0 * log_gamma(z)?.re).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn log_gamma_at_one_and_half() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.5 * PI.ln()).abs() < 1e-13);
        assert!(half.im.abs() < 1e-15);
    }

    #[test]
    fn log_gamma_matches_factorials() {
        let mut fact = 1.0_f64;
        for n in 1..20 {
            fact *= n as f64;
            let v = log_gamma(c(n as f64 + 1.0, 0.0)).unwrap();
            assert!((v.re - fact.ln()).abs() <= 1e-12 * fact.ln().max(1.0), "n = {n}");
        }
    }

    #[test]
    fn trigamma_known_values() {
        let zeta2 = PI * PI / 6.0;
        assert!((trigamma(c(1.0, 0.0)).unwrap().re - zeta2).abs() < 1e-12);
        assert!((trigamma(c(2.0, 0.0)).unwrap().re - (zeta2 - 1.0)).abs() < 1e-12);
        // ψ⁽¹⁾(1/2) = π²/2
        assert!((trigamma(c(0.5, 0.0)).unwrap().re - PI * PI / 2.0).abs() < 1e-11);
    }

    #[test]
    fn abs_gamma_sq_reflection_identity() {
        assert!((abs_gamma_sq(c(1.0, 0.0)).unwrap() - 1.0).abs() < 1e-14);
        let v = abs_gamma_sq(c(1.0, 1.0)).unwrap();
        assert!((v - PI / PI.sinh()).abs() < 1e-12);
        assert!((v - 0.272_029_055_0).abs() < 1e-10);
    }

    #[test]
    fn poles_are_rejected() {
        for re in [0.0, -1.0, -2.0, -7.0] {
            assert!(matches!(log_gamma(c(re, 0.0)), Err(Error::Pole { .. })));
            assert!(matches!(trigamma(c(re, 0.0)), Err(Error::Pole { .. })));
            assert!(matches!(abs_gamma_sq(c(re, 0.0)), Err(Error::Pole { .. })));
        }
        assert!(trigamma(c(-0.5, 0.0)).is_ok());
        assert!(log_gamma(c(0.0, 1e-3)).is_ok());
    }

    #[test]
    fn non_finite_input_is_an_error() {
        assert!(trigamma(c(f64::NAN, 0.0)).is_err());
        assert!(log_gamma(c(1.0, f64::INFINITY)).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn conjugate_symmetry(re in 0.05f64..30.0, im in -40.0f64..40.0) {
                let z = c(re, im);
                let t = trigamma(z).unwrap();
                let tc = trigamma(z.conj()).unwrap();
                prop_assert!((tc - t.conj()).norm() <= 1e-12 * t.norm().max(1.0));
                let g = log_gamma(z).unwrap();
                let gc = log_gamma(z.conj()).unwrap();
                prop_assert!((gc - g.conj()).norm() <= 1e-12 * g.norm().max(1.0));
            }

            #[test]
            fn trigamma_recurrence(re in 0.1f64..20.0, im in -30.0f64..30.0) {
                let z = c(re, im);
                let lhs = trigamma(z).unwrap();
                let rhs = trigamma(z + 1.0).unwrap() + (z * z).inv();
                prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
            }

            #[test]
            fn log_gamma_recurrence(re in 0.1f64..20.0, im in -30.0f64..30.0) {
                let z = c(re, im);
                let lhs = log_gamma(z + 1.0).unwrap().exp();
                let rhs = log_gamma(z).unwrap().exp() * z;
                prop_assert!((lhs - rhs).norm() <= 1e-11 * lhs.norm());
            }

            #[test]
            fn imaginary_axis_shift(b in 0.01f64..10.0) {
                let v = abs_gamma_sq(c(1.0, b)).unwrap();
                let ratio = v * (PI * b).sinh() / (PI * b);
                prop_assert!((ratio - 1.0).abs() <= 1e-10);
            }
        }
    }
}
