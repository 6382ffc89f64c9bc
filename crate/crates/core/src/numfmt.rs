//! Decimal formatting shared by the CSV and text outputs.

/// Shortest decimal that round-trips to the same `f64` (at most 17
/// significant digits). Plain notation for magnitudes in `[1e-5, 1e16)`,
/// exponent notation otherwise.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let a = x.abs();
    if a.is_finite() && (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
