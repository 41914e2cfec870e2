//! Number formatting shared by the CSV and JSON emitters.

/// Significant digits written for every floating-point field.
pub const SIGNIFICANT_DIGITS: i32 = 15;

/// Plain decimal rendering (never exponent notation) with
/// [`SIGNIFICANT_DIGITS`] significant digits.
pub fn fmt_decimal(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() {
            format!("{:.*}", (SIGNIFICANT_DIGITS - 1) as usize, 0.0)
        } else {
            x.to_string()
        };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}
