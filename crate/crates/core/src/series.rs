use std::ops::{Deref, DerefMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A truncated power series: coefficient `i` multiplies `x^i`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Series(pub Vec<Complex64>);

impl Series {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Series(coeffs)
    }

    pub fn zeros(n: usize) -> Self {
        Series(vec![Complex64::new(0.0, 0.0); n])
    }

    /// `1 mod x^n` (empty when `n == 0`).
    pub fn one(n: usize) -> Self {
        let mut s = Series::zeros(n);
        if n > 0 {
            s[0] = Complex64::new(1.0, 0.0);
        }
        s
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Series(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    /// The series reduced modulo `x^n`, zero-padded when shorter.
    pub fn truncated(&self, n: usize) -> Series {
        let mut out: Vec<Complex64> = self.0.iter().take(n).copied().collect();
        out.resize(n, Complex64::new(0.0, 0.0));
        Series(out)
    }

    /// Coefficient `i`, or zero past the end.
    pub fn coeff(&self, i: usize) -> Complex64 {
        self.0.get(i).copied().unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub(crate) fn ensure_finite(&self, what: &'static str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite(what))
        }
    }

    pub fn neg(&self) -> Series {
        Series(self.0.iter().map(|c| -c).collect())
    }
}

impl Deref for Series {
    type Target = Vec<Complex64>;

    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl DerefMut for Series {
    fn deref_mut(&mut self) -> &mut Self::Target {
        &mut self.0
    }
}

impl From<Vec<Complex64>> for Series {
    fn from(v: Vec<Complex64>) -> Self {
        Series(v)
    }
}

impl FromIterator<Complex64> for Series {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        Series(iter.into_iter().collect())
    }
}

pub fn max_abs(values: &[Complex64]) -> f64 {
    values.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Largest coefficient-wise distance between two series, treating missing
/// coefficients as zero.
pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or_default();
            let y = b.get(i).copied().unwrap_or_default();
            (x - y).norm()
        })
        .fold(0.0, f64::max)
}
