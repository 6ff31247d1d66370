//! `exp(f) mod x^n` for arbitrary `n`: chooses a block layout, bootstraps
//! the first block recursively, and hands off to the blockwise exponential.

use num_complex::Complex64;
use serde::Serialize;

use crate::blockseries::Block;
use crate::error::{Error, Result};
use crate::expcore::algorithm1_exp;
use crate::oracle::{check_zero_constant, naive_exp, naive_mul, INVERTIBLE_TOL};
use crate::series::Series;
use crate::transform::{CountReport, FftContext};

pub const DEFAULT_NAIVE_THRESHOLD: usize = 32;

/// Below this precision Newton steps multiply by schoolbook.
const NEWTON_SCHOOLBOOK_LIMIT: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpConfig {
    /// Orders `n <= naive_threshold` use the quadratic recurrence.
    pub naive_threshold: usize,
}

impl Default for ExpConfig {
    fn default() -> Self {
        ExpConfig {
            naive_threshold: DEFAULT_NAIVE_THRESHOLD,
        }
    }
}

/// Block layout for the fast path: `2s` blocks of size `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockPlan {
    pub s: usize,
    pub m: usize,
}

impl BlockPlan {
    /// Total block count.
    pub fn r(&self) -> usize {
        2 * self.s
    }

    pub fn padded_n(&self) -> usize {
        2 * self.s * self.m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExpPlan {
    pub n: usize,
    pub naive_threshold: usize,
    /// `None` selects the quadratic recurrence.
    pub blocks: Option<BlockPlan>,
}

impl ExpPlan {
    pub fn is_naive(&self) -> bool {
        self.blocks.is_none()
    }

    /// `s`, or 0 on the naive path.
    pub fn s(&self) -> usize {
        self.blocks.map_or(0, |b| b.s)
    }

    /// `m`, or 0 on the naive path.
    pub fn m(&self) -> usize {
        self.blocks.map_or(0, |b| b.m)
    }

    pub fn r(&self) -> usize {
        2 * self.s()
    }

    pub fn padded_n(&self) -> usize {
        self.blocks.map_or(self.n, |b| b.padded_n())
    }
}

/// Picks `s` as the power of two nearest to `√n/4` (ties go down, at least
/// 1) and `m` as the smallest power of two with `2sm ≥ n`.
pub fn plan_parameters(n: usize, config: &ExpConfig) -> Result<ExpPlan> {
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    if n <= config.naive_threshold {
        return Ok(ExpPlan {
            n,
            naive_threshold: config.naive_threshold,
            blocks: None,
        });
    }
    let target = (n as f64).sqrt() / 4.0;
    let mut s = 1usize;
    while (2 * s) as f64 <= target {
        s *= 2;
    }
    // s ≤ target < 2s here (or target < 1)
    if target - s as f64 > (2 * s) as f64 - target {
        s *= 2;
    }
    let m = n.div_ceil(2 * s).next_power_of_two();
    Ok(ExpPlan {
        n,
        naive_threshold: config.naive_threshold,
        blocks: Some(BlockPlan { s, m }),
    })
}

/// A fast-path plan with caller-chosen `s` and `m`.
pub fn plan_with_blocks(n: usize, s: usize, m: usize, config: &ExpConfig) -> Result<ExpPlan> {
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    if !s.is_power_of_two() || !m.is_power_of_two() {
        return Err(Error::Contract(format!(
            "s = {s} and m = {m} must both be powers of two"
        )));
    }
    if 2 * s * m < n {
        return Err(Error::Contract(format!(
            "2sm = {} is smaller than n = {n}",
            2 * s * m
        )));
    }
    Ok(ExpPlan {
        n,
        naive_threshold: config.naive_threshold,
        blocks: Some(BlockPlan { s, m }),
    })
}

/// Result of one exponential together with what it cost.
#[derive(Debug, Clone)]
pub struct ExpOutcome {
    pub series: Series,
    pub plan: ExpPlan,
    /// Transforms of the top-level blockwise exponential alone.
    pub top_level: CountReport,
    /// Transforms of every level, including the Newton reciprocals.
    pub all_levels: CountReport,
}

/// `exp(f) mod x^n`.
pub fn exp_series(f: &[Complex64], n: usize) -> Result<Series> {
    Ok(exp_series_with(f, n, &ExpConfig::default())?.series)
}

pub fn exp_series_with(f: &[Complex64], n: usize, config: &ExpConfig) -> Result<ExpOutcome> {
    let plan = plan_parameters(n, config)?;
    exp_series_planned(f, &plan, config)
}

/// `exp(f) mod x^n` following a given top-level plan; lower levels are
/// planned by `config`.
pub fn exp_series_planned(f: &[Complex64], plan: &ExpPlan, config: &ExpConfig) -> Result<ExpOutcome> {
    let n = plan.n;
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    check_zero_constant(f)?;
    let f = &f[..f.len().min(plan.padded_n())];
    if f.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("input series"));
    }

    let Some(BlockPlan { s, m }) = plan.blocks else {
        return Ok(ExpOutcome {
            series: naive_exp(f, n)?,
            plan: *plan,
            top_level: CountReport::default(),
            all_levels: CountReport::default(),
        });
    };

    let low = &f[..f.len().min(m)];
    let first = exp_series_with(low, m, config)?;
    let (u, newton_counts) = reciprocal_counted(&first.series, m)?;

    let mut ctx = FftContext::with_lengths(&[2 * m])?;
    let g0 = Block::new(first.series.into_inner())?;
    let u = Block::new(u.into_inner())?;
    let mut g = algorithm1_exp(&mut ctx, s, f, &g0, &u)?;
    g.truncate(n);

    let top_level = ctx.snapshot_counts();
    let mut all_levels = first.all_levels;
    all_levels.merge(&newton_counts);
    all_levels.merge(&top_level);
    Ok(ExpOutcome {
        series: g,
        plan: *plan,
        top_level,
        all_levels,
    })
}

/// `1/h mod x^n` by Newton doubling `w ← w·(2 − h·w)` from `w = 1/h[0]`.
pub fn newton_reciprocal(h: &[Complex64], n: usize) -> Result<Series> {
    Ok(reciprocal_counted(h, n)?.0)
}

fn reciprocal_counted(h: &[Complex64], n: usize) -> Result<(Series, CountReport)> {
    let h0 = h.first().copied().unwrap_or_default();
    if h0.norm() < INVERTIBLE_TOL {
        return Err(Error::NotInvertible);
    }
    if n == 0 {
        return Ok((Series::default(), CountReport::default()));
    }
    let mut ctx = FftContext::new((2 * n).next_power_of_two())?;
    let mut mul = |a: &[Complex64], b: &[Complex64], len: usize| -> Result<Series> {
        if len <= NEWTON_SCHOOLBOOK_LIMIT {
            Ok(naive_mul(a, b, len))
        } else {
            ctx.multiply(a, b, len)
        }
    };

    let mut w = Series::new(vec![h0.inv()]);
    let mut prec = 1;
    while prec < n {
        let next = (2 * prec).min(n);
        let hw = mul(&h[..h.len().min(next)], &w, next)?;
        let mut correction = hw.neg();
        correction[0] += Complex64::new(2.0, 0.0);
        w = mul(&w, &correction, next)?;
        prec = next;
    }
    w.ensure_finite("reciprocal")?;
    Ok((w, ctx.snapshot_counts()))
}
