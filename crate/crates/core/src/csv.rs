//! Number formatting shared by every CSV writer in the crate.

/// 17 significant digits in scientific notation, so output is
/// byte-identical across runs and round-trips exactly.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // collapse -0.0
        return format!("{:.16e}", 0.0);
    }
    format!("{x:.16e}")
}
