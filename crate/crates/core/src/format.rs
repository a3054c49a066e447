//! Fixed-precision number formatting shared by the CSV and JSON writers.

/// Significant digits of every floating value written to an artifact.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Shortest decimal text of `round_sig(x)`.
pub fn fmt_num(x: f64) -> String {
    round_sig(x).to_string()
}
