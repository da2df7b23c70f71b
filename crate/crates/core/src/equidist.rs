//! Diagnostics for uniform distribution modulo one on the window `(-1/2, 1/2]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::summation::CompensatedComplex;

/// Values per partial Weyl sum. Fixed so the reduction order never depends
/// on the thread count.
const WEYL_CHUNK: usize = 1 << 14;

/// Reals reduced to `(-1/2, 1/2]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModOneSample {
    values: Vec<f64>,
}

impl ModOneSample {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

#[inline]
fn to_window(x: f64) -> f64 {
    if x > -0.5 && x <= 0.5 {
        return x;
    }
    let r = x - (x - 0.5).ceil();
    if r > 0.5 {
        r - 1.0
    } else if r <= -0.5 {
        r + 1.0
    } else {
        r
    }
}

/// Maps each value to `(-1/2, 1/2]` by subtracting an integer; `-1/2` goes to
/// `+1/2`.
pub fn reduce_mod_one<I: IntoIterator<Item = f64>>(raw: I) -> Result<ModOneSample> {
    let values = raw
        .into_iter()
        .enumerate()
        .map(|(index, x)| {
            if x.is_finite() {
                Ok(to_window(x))
            } else {
                Err(Error::NonFinite { index })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModOneSample { values })
}

/// Star discrepancy of the sample shifted to `[0, 1)` by `+1/2`.
pub fn star_discrepancy(sample: &ModOneSample) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut shifted: Vec<f64> = sample
        .values
        .iter()
        .map(|&v| {
            let u = v + 0.5;
            if u >= 1.0 {
                u - 1.0
            } else {
                u
            }
        })
        .collect();
    shifted.sort_unstable_by(f64::total_cmp);
    let n = shifted.len() as f64;
    let worst = shifted
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let above = (i + 1) as f64 / n - u;
            let below = u - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylReport {
    pub n: usize,
    pub ms: Vec<i64>,
    /// `S_m = Σ e(m x_j)`.
    pub sums: Vec<Complex64>,
    /// `|S_m| / n`.
    pub normalized: Vec<f64>,
}

/// `e(m x) = exp(2πi m x)`.
#[inline]
pub(crate) fn character(m: i64, x: f64) -> Complex64 {
    // (m x) is reduced first so the angle stays small
    let angle = 2.0 * PI * to_window((m as f64) * x);
    let (sin, cos) = angle.sin_cos();
    Complex64::new(cos, sin)
}

fn weyl_sum(values: &[f64], m: i64) -> Complex64 {
    let partials: Vec<CompensatedComplex> = values
        .par_chunks(WEYL_CHUNK)
        .map(|chunk| {
            let mut acc = CompensatedComplex::new();
            chunk.iter().for_each(|&x| acc.add(character(m, x)));
            acc
        })
        .collect();
    let mut total = CompensatedComplex::new();
    partials.iter().for_each(|p| total.merge(p));
    total.value()
}

/// Weyl sums for nonzero frequencies. `m = 0` is rejected; its sum is `n`.
pub fn weyl_sums(sample: &ModOneSample, ms: &[i64]) -> Result<WeylReport> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if ms.contains(&0) {
        return Err(Error::ZeroFrequency);
    }
    let n = sample.len();
    let sums: Vec<Complex64> = ms.iter().map(|&m| weyl_sum(&sample.values, m)).collect();
    let normalized = sums.iter().map(|s| s.norm() / n as f64).collect();
    Ok(WeylReport {
        n,
        ms: ms.to_vec(),
        sums,
        normalized,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub bins: usize,
    pub counts: Vec<u64>,
    /// `Σ (count - n/bins)² / (n/bins)`; a raw statistic, no test implied.
    pub chi_square: f64,
}

/// Bin `k` covers `(-1/2 + k/bins, -1/2 + (k+1)/bins]`.
pub fn histogram(sample: &ModOneSample, bins: usize) -> Result<Histogram> {
    if bins < 2 {
        return Err(Error::InvalidParameter(format!("bins = {bins} must be at least 2")));
    }
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut counts = vec![0u64; bins];
    let width = bins as f64;
    for &v in &sample.values {
        let k = ((v + 0.5) * width).ceil() as i64 - 1;
        counts[k.clamp(0, bins as i64 - 1) as usize] += 1;
    }
    let expected = sample.len() as f64 / width;
    let chi_square = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    Ok(Histogram {
        bins,
        counts,
        chi_square,
    })
}

/// Fraction of raw values in the open interval `(lo, hi)`.
pub fn interval_fraction(values: &[f64], lo: f64, hi: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let hits = values.iter().filter(|&&v| lo < v && v < hi).count();
    Ok(hits as f64 / values.len() as f64)
}
