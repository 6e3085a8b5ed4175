//! Shared formatting for CSV reports.

/// Token written for ratios whose denominator is zero.
pub const UNDEFINED: &str = "NA";

/// Fixed six-decimal rendering keeps report files byte-stable across runs.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.6}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| UNDEFINED.to_string(), fmt_f64)
}

/// `numerator / denominator`, undefined when the denominator is zero.
pub fn ratio(numerator: u64, denominator: u64) -> Option<f64> {
    (denominator > 0).then(|| numerator as f64 / denominator as f64)
}

/// Quotes a CSV field when needed.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
