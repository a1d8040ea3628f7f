use std::fs;
use std::io;
use std::path::Path;

use hubbath_core::PopulationTrace;

const SIGNIFICANT_DIGITS: i32 = 12;

/// Fixed-point decimal with 12 significant digits.
pub fn format_probability(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.*}", (SIGNIFICANT_DIGITS - 1) as usize, 0.0);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let mut decimals = (SIGNIFICANT_DIGITS - 1 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit (0.99999999999999 -> 1.000...).
    let rounded: f64 = s.parse().expect("formatted float parses");
    if rounded != 0.0 && rounded.abs().log10().floor() as i32 > magnitude && decimals > 0 {
        decimals -= 1;
        s = format!("{x:.decimals$}");
    }
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s.remove(0);
    }
    s
}

pub fn trace_to_csv(trace: &PopulationTrace) -> String {
    let mut out = String::from("n");
    for label in trace.basis_labels() {
        out.push_str(",p_");
        out.push_str(label);
    }
    out.push('\n');
    for (k, row) in trace.rows().iter().enumerate() {
        out.push_str(&k.to_string());
        for &p in row {
            out.push(',');
            out.push_str(&format_probability(p));
        }
        out.push('\n');
    }
    out
}

pub fn write_trace_csv(trace: &PopulationTrace, path: &Path) -> io::Result<()> {
    fs::write(path, trace_to_csv(trace))
}
