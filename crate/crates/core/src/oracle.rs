//! Quadratic-time reference arithmetic on truncated series.
//!
//! Nothing here touches the transform module, so these routines serve as
//! independent ground truth for the fast paths.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::Series;

/// Tolerance on "the constant term is zero" for exponential inputs.
pub const ZERO_CONSTANT_TOL: f64 = 1e-12;
/// Tolerance on "the constant term is one" for logarithm inputs.
pub const UNIT_CONSTANT_TOL: f64 = 1e-10;
/// Below this magnitude a constant term is treated as zero when inverting.
pub const INVERTIBLE_TOL: f64 = 1e-12;

/// Schoolbook product `a·b mod x^n`.
pub fn naive_mul(a: &[Complex64], b: &[Complex64], n: usize) -> Series {
    let mut out = Series::zeros(n);
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai == Complex64::default() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `exp(f) mod x^n` from the recurrence `k·g[k] = Σ_{j=1..k} j·f[j]·g[k−j]`,
/// i.e. `δg = g·δf`.
pub fn naive_exp(f: &[Complex64], n: usize) -> Result<Series> {
    check_zero_constant(f)?;
    let mut g = Series::zeros(n);
    if n == 0 {
        return Ok(g);
    }
    g[0] = Complex64::new(1.0, 0.0);
    let df: Vec<Complex64> = (0..n)
        .map(|j| f.get(j).copied().unwrap_or_default() * j as f64)
        .collect();
    for k in 1..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k {
            acc += df[j] * g[k - j];
        }
        g[k] = acc / k as f64;
    }
    Ok(g)
}

/// `log(g) mod x^n` for `g[0] = 1`, via `δf = δg / g`.
pub fn naive_log(g: &[Complex64], n: usize) -> Result<Series> {
    let g0 = g.first().copied().unwrap_or_default();
    if (g0 - Complex64::new(1.0, 0.0)).norm() > UNIT_CONSTANT_TOL {
        return Err(Error::NotUnitConstantTerm);
    }
    let dg: Vec<Complex64> = g.iter().take(n).enumerate().map(|(j, &c)| c * j as f64).collect();
    let inv = naive_reciprocal(g, n)?;
    let mut f = naive_mul(&dg, &inv, n);
    if n > 0 {
        f[0] = Complex64::new(0.0, 0.0);
    }
    for (k, c) in f.iter_mut().enumerate().skip(1) {
        *c /= k as f64;
    }
    Ok(f)
}

/// `1/h mod x^n` by forward substitution.
pub fn naive_reciprocal(h: &[Complex64], n: usize) -> Result<Series> {
    let h0 = h.first().copied().unwrap_or_default();
    if h0.norm() < INVERTIBLE_TOL {
        return Err(Error::NotInvertible);
    }
    let inv_h0 = h0.inv();
    let mut r = Series::zeros(n);
    if n == 0 {
        return Ok(r);
    }
    r[0] = inv_h0;
    for k in 1..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k.min(h.len() - 1) {
            acc += h[j] * r[k - j];
        }
        r[k] = -acc * inv_h0;
    }
    Ok(r)
}

pub(crate) fn check_zero_constant(f: &[Complex64]) -> Result<()> {
    match f.first() {
        Some(c) if c.norm() >= ZERO_CONSTANT_TOL => Err(Error::NonzeroConstantTerm),
        _ => Ok(()),
    }
}
