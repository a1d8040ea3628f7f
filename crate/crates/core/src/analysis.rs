//! Spectral analysis of population traces.

use alloc::vec::Vec;
use core::f64::consts::PI;


#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::{Error, Result};

/// Zero-padding factor of the frequency grid.
const OVERSAMPLE: usize = 16;

fn power_at(centered: &[f64], omega: f64) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (n, &x) in centered.iter().enumerate() {
        let phase = omega * n as f64;
        re += x * phase.cos();
        im -= x * phase.sin();
    }
    re * re + im * im
}

/// Angular frequency (radians per sample) of the strongest spectral line in
/// `[min_freq, max_freq]`.
///
/// The series is mean-subtracted and Hann-windowed; the discrete Fourier
/// transform is scanned on a zero-padded grid and the best bin refined by
/// golden-section search. Frequencies within two bins of DC are skipped.
pub fn dominant_frequency(series: &[f64], min_freq: f64, max_freq: f64) -> Result<f64> {
    let n = series.len();
    if n < 8 {
        return Err(Error::param("series", "need at least 8 samples"));
    }
    if max_freq.is_nan() || min_freq.is_nan() || max_freq <= min_freq || max_freq > PI {
        return Err(Error::param("max_freq", "must exceed min_freq and not exceed π"));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = series
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let w = 0.5 - 0.5 * (2.0 * PI * k as f64 / (n - 1) as f64).cos();
            (x - mean) * w
        })
        .collect();

    let bin = 2.0 * PI / n as f64;
    let lo = min_freq.max(2.0 * bin);
    if lo >= max_freq {
        return Err(Error::param("series", "too short to resolve the frequency band"));
    }
    let step = bin / OVERSAMPLE as f64;
    let count = ((max_freq - lo) / step).floor() as usize;
    let (best_k, _) = (0..=count)
        .map(|k| (k, power_at(&centered, lo + k as f64 * step)))
        .fold((0, f64::MIN), |acc, cur| if cur.1 > acc.1 { cur } else { acc });

    // Golden-section refinement on the bracketing interval.
    let mut a = (lo + (best_k as f64 - 1.0) * step).max(lo);
    let mut b = (lo + (best_k as f64 + 1.0) * step).min(max_freq);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (power_at(&centered, c), power_at(&centered, d));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = power_at(&centered, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = power_at(&centered, d);
        }
    }
    Ok(0.5 * (a + b))
}
