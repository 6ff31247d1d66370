//! Radix-2 complex FFT over power-of-two lengths, with exact per-length
//! counts of every forward and inverse transform performed.
//!
//! Convention: `ω_L = exp(2πi/L)`. The forward transform evaluates at
//! `ω_L^j`, i.e. `X[j] = Σ_t x[t] ω_L^{tj}`; the inverse uses `ω_L^{-jk}`
//! and scales by `1/L`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::Series;

/// Fourier image of a zero-padded coefficient sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Transform {
    values: Vec<Complex64>,
}

impl Transform {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Wraps precomputed transform values, e.g. a pointwise combination of
    /// other transforms. No transform is counted.
    pub fn from_values(values: Vec<Complex64>) -> Result<Self> {
        check_length(values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("transform values"));
        }
        Ok(Transform { values })
    }

    /// Pointwise product of two transforms of equal length.
    pub fn pointwise_mul(&self, other: &Transform) -> Result<Transform> {
        if self.len() != other.len() {
            return Err(Error::Contract(format!(
                "pointwise product of transforms of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Transform { values })
    }
}

/// Tallies of transforms performed, keyed by transform length.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub forward: BTreeMap<usize, u64>,
    pub inverse: BTreeMap<usize, u64>,
}

impl CountReport {
    pub fn forward_at(&self, len: usize) -> u64 {
        self.forward.get(&len).copied().unwrap_or(0)
    }

    pub fn inverse_at(&self, len: usize) -> u64 {
        self.inverse.get(&len).copied().unwrap_or(0)
    }

    /// Forward plus inverse transforms of length `len`.
    pub fn total_at(&self, len: usize) -> u64 {
        self.forward_at(len) + self.inverse_at(len)
    }

    /// All transforms of every length.
    pub fn total(&self) -> u64 {
        self.forward.values().chain(self.inverse.values()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }

    /// Tallies accumulated since `earlier`, a previous snapshot of the same
    /// context.
    pub fn since(&self, earlier: &CountReport) -> CountReport {
        let diff = |now: &BTreeMap<usize, u64>, then: &BTreeMap<usize, u64>| {
            now.iter()
                .filter_map(|(&len, &n)| {
                    let d = n - then.get(&len).copied().unwrap_or(0);
                    (d > 0).then_some((len, d))
                })
                .collect()
        };
        CountReport {
            forward: diff(&self.forward, &earlier.forward),
            inverse: diff(&self.inverse, &earlier.inverse),
        }
    }

    pub fn merge(&mut self, other: &CountReport) {
        for (&len, &n) in &other.forward {
            *self.forward.entry(len).or_default() += n;
        }
        for (&len, &n) in &other.inverse {
            *self.inverse.entry(len).or_default() += n;
        }
    }
}

/// Precomputed roots of unity for a set of power-of-two lengths, plus the
/// transform counters.
///
/// A context is meant to be used from one thread at a time; independent
/// contexts share nothing.
#[derive(Debug, Clone)]
pub struct FftContext {
    roots: BTreeMap<usize, Vec<Complex64>>,
    counts: CountReport,
}

impl FftContext {
    /// A context supporting every power-of-two length from 2 up to `max_len`.
    pub fn new(max_len: usize) -> Result<Self> {
        check_length(max_len)?;
        let lengths: Vec<usize> = (1..=max_len.trailing_zeros()).map(|b| 1 << b).collect();
        Self::with_lengths(&lengths)
    }

    /// A context supporting exactly the given lengths.
    pub fn with_lengths(lengths: &[usize]) -> Result<Self> {
        let mut roots = BTreeMap::new();
        for &len in lengths {
            check_length(len)?;
            roots.entry(len).or_insert_with(|| root_table(len));
        }
        Ok(FftContext {
            roots,
            counts: CountReport::default(),
        })
    }

    pub fn supports(&self, len: usize) -> bool {
        self.roots.contains_key(&len)
    }

    /// `ω_len^t` for `t < len`.
    pub fn roots(&self, len: usize) -> Option<&[Complex64]> {
        self.roots.get(&len).map(Vec::as_slice)
    }

    pub fn snapshot_counts(&self) -> CountReport {
        self.counts.clone()
    }

    fn table(&self, len: usize) -> Result<&[Complex64]> {
        check_length(len)?;
        self.roots(len).ok_or(Error::UnsupportedLength(len))
    }

    /// Transform of `coeffs` zero-padded to `len`.
    pub fn forward_transform(&mut self, coeffs: &[Complex64], len: usize) -> Result<Transform> {
        let table = self.table(len)?;
        if coeffs.len() > len {
            return Err(Error::InputTooLong {
                got: coeffs.len(),
                len,
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("transform input"));
        }
        let mut values = vec![Complex64::new(0.0, 0.0); len];
        values[..coeffs.len()].copy_from_slice(coeffs);
        fft_in_place(&mut values, table, false);
        *self.counts.forward.entry(len).or_default() += 1;
        Ok(Transform { values })
    }

    /// Coefficients whose forward transform is `t`.
    pub fn inverse_transform(&mut self, t: &Transform) -> Result<Vec<Complex64>> {
        let len = t.len();
        let table = self.table(len)?;
        let mut values = t.values.clone();
        fft_in_place(&mut values, table, true);
        let scale = 1.0 / len as f64;
        for v in &mut values {
            *v *= scale;
        }
        *self.counts.inverse.entry(len).or_default() += 1;
        Ok(values)
    }

    /// `a·b mod x^n` by a single zero-padded cyclic convolution
    /// (two forward transforms and one inverse).
    pub fn multiply(&mut self, a: &[Complex64], b: &[Complex64], n: usize) -> Result<Series> {
        let a = &a[..a.len().min(n)];
        let b = &b[..b.len().min(n)];
        if a.is_empty() || b.is_empty() {
            return Ok(Series::zeros(n));
        }
        let len = (a.len() + b.len() - 1).next_power_of_two().max(2);
        let fa = self.forward_transform(a, len)?;
        let fb = self.forward_transform(b, len)?;
        let mut out = self.inverse_transform(&fa.pointwise_mul(&fb)?)?;
        out.resize(n, Complex64::new(0.0, 0.0));
        Ok(Series(out))
    }
}

fn check_length(len: usize) -> Result<()> {
    if len >= 2 && len.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::InvalidLength(len))
    }
}

fn root_table(len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|t| {
            let (sin, cos) = (2.0 * PI * t as f64 / len as f64).sin_cos();
            Complex64::new(cos, sin)
        })
        .collect()
}

/// Iterative decimation-in-time FFT. `table` holds `ω_L^t` for the full
/// length `L = values.len()`; smaller stages stride through it.
fn fft_in_place(values: &mut [Complex64], table: &[Complex64], inverse: bool) {
    let n = values.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            values.swap(i, j);
        }
    }

    let mut half = 1;
    while half < n {
        let stride = n / (2 * half);
        for start in (0..n).step_by(2 * half) {
            for t in 0..half {
                let w = table[t * stride];
                let w = if inverse { w.conj() } else { w };
                let lo = values[start + t];
                let hi = values[start + t + half] * w;
                values[start + t] = lo + hi;
                values[start + t + half] = lo - hi;
            }
        }
        half *= 2;
    }
}
