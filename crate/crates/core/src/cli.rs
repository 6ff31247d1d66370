//! Machinery behind the `fastexp` command-line tool: coefficient files,
//! seeded random inputs, run reports, the verification suites and the
//! benchmark table. The binary itself only parses arguments.

use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::blockseries::Block;
use crate::driver::{exp_series_planned, plan_parameters, ExpConfig, ExpOutcome, ExpPlan};
use crate::error::{Error, Result};
use crate::expcore::algorithm1_exp;
use crate::oracle::{naive_exp, naive_log, naive_mul};
use crate::series::{max_abs_diff, Series};
use crate::transform::FftContext;

/// Parses one coefficient per line as `"re im"`. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_coefficients(text: &str) -> Result<Series> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: i + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [re, im] = fields[..] else {
            return Err(parse_err(format!(
                "expected \"re im\", found {} fields",
                fields.len()
            )));
        };
        let re: f64 = re
            .parse()
            .map_err(|e| parse_err(format!("bad real part {re:?}: {e}")))?;
        let im: f64 = im
            .parse()
            .map_err(|e| parse_err(format!("bad imaginary part {im:?}: {e}")))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(parse_err("non-finite coefficient".into()));
        }
        out.push(Complex64::new(re, im));
    }
    Ok(Series(out))
}

/// One `"re im"` line per coefficient, shortest round-trip decimal form.
pub fn format_coefficients(series: &[Complex64]) -> String {
    let mut out = String::with_capacity(series.len() * 40);
    for c in series {
        let _ = writeln!(out, "{} {}", c.re, c.im);
    }
    out
}

pub fn format_coefficients_csv(series: &[Complex64]) -> String {
    let mut out = String::from("index,re,im\n");
    for (i, c) in series.iter().enumerate() {
        let _ = writeln!(out, "{i},{},{}", c.re, c.im);
    }
    out
}

/// Uniform in `[0, 1)` from the top 53 bits.
fn unit(rng: &mut SplitMix64) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `n` coefficients with `f_0 = 0` and `f_j` uniform in the square
/// `[−1/(j+1), 1/(j+1)]²`.
pub fn random_series(seed: u64, n: usize) -> Series {
    let mut rng = SplitMix64::seed_from_u64(seed);
    (0..n)
        .map(|j| {
            let re = 2.0 * unit(&mut rng) - 1.0;
            let im = 2.0 * unit(&mut rng) - 1.0;
            if j == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(re, im) / (j + 1) as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub n: usize,
    pub s: usize,
    pub m: usize,
    pub forward_2m: u64,
    pub inverse_2m: u64,
    pub total_transforms_all_levels: u64,
    pub wall_ms: f64,
    pub max_abs_err: Option<f64>,
    pub seed: Option<u64>,
}

impl RunReport {
    fn from_outcome(outcome: &ExpOutcome, wall_ms: f64, seed: Option<u64>) -> Self {
        let len = 2 * outcome.plan.m();
        RunReport {
            n: outcome.plan.n,
            s: outcome.plan.s(),
            m: outcome.plan.m(),
            forward_2m: outcome.top_level.forward_at(len),
            inverse_2m: outcome.top_level.inverse_at(len),
            total_transforms_all_levels: outcome.all_levels.total(),
            wall_ms,
            max_abs_err: None,
            seed,
        }
    }
}

/// Runs one exponential and reports on it. With `check`, the result is
/// compared against the quadratic recurrence.
pub fn run_exp(
    f: &[Complex64],
    plan: &ExpPlan,
    config: &ExpConfig,
    seed: Option<u64>,
    check: bool,
) -> Result<(Series, RunReport)> {
    let start = Instant::now();
    let outcome = exp_series_planned(f, plan, config)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut report = RunReport::from_outcome(&outcome, wall_ms, seed);
    if check {
        let want = naive_exp(&f[..f.len().min(plan.n)], plan.n)?;
        report.max_abs_err = Some(max_abs_diff(&outcome.series, &want));
    }
    Ok((outcome.series, report))
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Perturbs every computed exponential, to confirm the suites notice.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_n: 512,
            trials: 20,
            seed: 1,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub suites: Vec<SuiteResult>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let _ = writeln!(
                out,
                "{:<22} {}  cases={:<4} worst={:.3e} tol={:.1e}",
                s.name,
                if s.passed { "PASS" } else { "FAIL" },
                s.cases,
                s.worst,
                s.tolerance
            );
        }
        out
    }
}

struct Suite {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    worst: f64,
    failed: bool,
}

impl Suite {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Suite {
            name,
            tolerance,
            cases: 0,
            worst: 0.0,
            failed: false,
        }
    }

    fn record(&mut self, err: f64) {
        self.cases += 1;
        // NaN must fail
        if err.is_nan() || err > self.tolerance {
            self.failed = true;
        }
        self.worst = if err.is_nan() { f64::NAN } else { self.worst.max(err) };
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases: self.cases,
            worst: self.worst,
            tolerance: self.tolerance,
            passed: !self.failed,
        }
    }
}

pub const ORACLE_TOL: f64 = 1e-8;
pub const IDENTITY_TOL: f64 = 1e-7;

/// Runs the oracle-equivalence, multiplicative-inverse, log-roundtrip and
/// exact-count suites on seeded random inputs of order up to `max_n`.
pub fn run_verify(opts: &VerifyOptions) -> Result<VerifySummary> {
    let config = ExpConfig::default();
    let max_n = opts.max_n.max(1);
    let mut oracle = Suite::new("oracle-equivalence", ORACLE_TOL);
    let mut inverse = Suite::new("multiplicative-inverse", IDENTITY_TOL);
    let mut log = Suite::new("log-roundtrip", IDENTITY_TOL);
    let mut count = Suite::new("exact-count", 0.0);

    let mut seeds = SplitMix64::seed_from_u64(opts.seed);
    for t in 0..opts.trials {
        let trial_seed = seeds.next_u64();
        let n = if t == 0 {
            max_n
        } else {
            1 + (seeds.next_u64() % max_n as u64) as usize
        };
        let f = random_series(trial_seed, n);
        let plan = plan_parameters(n, &config)?;
        let mut out = exp_series_planned(&f, &plan, &config)?;
        let neg = exp_series_planned(&f.neg(), &plan, &config)?;
        if opts.inject_fault {
            out.series[n / 2] += Complex64::new(1e-4, 0.0);
        }

        let want = naive_exp(&f, n)?;
        oracle.record(max_abs_diff(&out.series, &want) / (1.0 + want.max_abs()));

        let product = naive_mul(&out.series, &neg.series, n);
        inverse.record(max_abs_diff(&product, &Series::one(n)));

        match naive_log(&out.series, n) {
            Ok(back) => log.record(max_abs_diff(&back, &f)),
            Err(_) => log.record(f64::INFINITY),
        }

        if let Some(b) = out.plan.blocks {
            let expected = 13 * b.s as u64 - 4;
            let got = out.top_level.total_at(2 * b.m);
            let other = out.top_level.total() - got;
            count.record((got.abs_diff(expected) + other) as f64);
        }
    }

    // direct calls on a small grid, independent of max_n
    for s in [1usize, 2, 3, 4] {
        for m in [2usize, 4, 8] {
            let f = random_series(opts.seed ^ (s * 131 + m) as u64, 2 * s * m);
            let g0 = naive_exp(&f[..m], m)?;
            let u = naive_exp(&f.neg()[..m], m)?;
            let mut ctx = FftContext::with_lengths(&[2 * m])?;
            let g = algorithm1_exp(
                &mut ctx,
                s,
                &f,
                &Block::new(g0.into_inner())?,
                &Block::new(u.into_inner())?,
            )?;
            let got = ctx.snapshot_counts().total_at(2 * m);
            count.record(got.abs_diff(13 * s as u64 - 4) as f64);
            let want = naive_exp(&f, 2 * s * m)?;
            oracle.record(max_abs_diff(&g, &want) / (1.0 + want.max_abs()));
        }
    }

    Ok(VerifySummary {
        suites: vec![oracle.finish(), inverse.finish(), log.finish(), count.finish()],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub s: usize,
    pub m: usize,
    pub fwd: u64,
    pub inv: u64,
    pub wall_ms_fast: f64,
    pub wall_ms_naive: f64,
}

pub const BENCH_CSV_HEADER: &str = "n,s,m,fwd,inv,wall_ms_fast,wall_ms_naive";

/// Best-of-`repeat` wall time of the fast path and of the recurrence for
/// each order, with top-level transform tallies.
pub fn run_bench(n_list: &[usize], repeat: usize, seed: u64) -> Result<Vec<BenchRow>> {
    let config = ExpConfig::default();
    let repeat = repeat.max(1);
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let f = random_series(seed, n);
        let plan = plan_parameters(n, &config)?;
        let mut fast = f64::INFINITY;
        let mut naive = f64::INFINITY;
        let mut outcome = None;
        for _ in 0..repeat {
            let start = Instant::now();
            let out = exp_series_planned(&f, &plan, &config)?;
            fast = fast.min(start.elapsed().as_secs_f64() * 1e3);
            outcome = Some(out);

            let start = Instant::now();
            let g = naive_exp(&f, n)?;
            naive = naive.min(start.elapsed().as_secs_f64() * 1e3);
            std::hint::black_box(g);
        }
        let outcome = outcome.expect("repeat >= 1");
        let len = 2 * plan.m();
        rows.push(BenchRow {
            n,
            s: plan.s(),
            m: plan.m(),
            fwd: outcome.top_level.forward_at(len),
            inv: outcome.top_level.inverse_at(len),
            wall_ms_fast: fast,
            wall_ms_naive: naive,
        });
    }
    Ok(rows)
}

pub fn format_bench_csv(rows: &[BenchRow]) -> String {
    let mut out = format!("{BENCH_CSV_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.4},{:.4}",
            r.n, r.s, r.m, r.fwd, r.inv, r.wall_ms_fast, r.wall_ms_naive
        );
    }
    out
}
