//! The blockwise exponential: given `g_[0] = exp(f_[0]) mod X` and
//! `u = exp(−f_[0]) mod X`, compute `exp(f) mod X^{2s}` using exactly
//! `13s − 4` transforms of length `2m`.
//!
//! Phase 1 solves `δg = g·δf` block by block for the first `s` blocks.
//! Phase 2 extends `q = δg₀/g₀` to `2s` blocks by blockwise division.
//! Phase 3 recovers the residual `ε` with `q = δf + δ(ε·X^s)` and writes
//! the upper half as `g₀·(1 − ε·X^s)`; the transforms of those upper
//! blocks are never computed.

use num_complex::Complex64;

use crate::blockseries::{
    block_product, delta, delta_k_inverse, pointwise_low_half, Block, BlockSeries,
};
use crate::error::{Error, Result};
use crate::oracle::{check_zero_constant, naive_exp};
use crate::series::{max_abs_diff, Series};
use crate::transform::{FftContext, Transform};

/// Tolerance for the supplied `g_[0]` and `u`, relative to their size.
pub const BASE_CASE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Prepared,
    FirstHalf,
    Quotient,
    Done,
}

/// Working state of one blockwise exponential.
#[derive(Debug, Clone)]
pub struct ExpState {
    s: usize,
    m: usize,
    f_blocks: BlockSeries,
    df_blocks: BlockSeries,
    g_blocks: BlockSeries,
    u_block: Block,
    u_transform: Transform,
    q_blocks: BlockSeries,
    eps_blocks: BlockSeries,
    phase: Phase,
}

impl ExpState {
    /// Checks the input contract and computes the transforms of `g_[0]`,
    /// `u` and `(δf)_[0..s)` (`s + 2` forward transforms).
    ///
    /// `f` is read modulo `x^{2sm}`; the block size `m` is `g0.m()`.
    pub fn new(
        ctx: &mut FftContext,
        s: usize,
        f: &[Complex64],
        g0: &Block,
        u: &Block,
    ) -> Result<Self> {
        if s == 0 {
            return Err(Error::Contract("s must be at least 1".into()));
        }
        let m = g0.m();
        if u.m() != m {
            return Err(Error::BlockSizeMismatch {
                expected: m,
                got: u.m(),
            });
        }
        if !ctx.supports(2 * m) {
            return Err(Error::UnsupportedLength(2 * m));
        }
        check_zero_constant(f)?;
        let f = &f[..f.len().min(2 * s * m)];
        if f.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("input series"));
        }
        check_base_case(f, g0, u)?;

        let f_blocks = BlockSeries::split_blocks(f, m, 2 * s)?;
        let df = delta(&f[..f.len().min(s * m)]);
        let mut df_blocks = BlockSeries::split_blocks(&df, m, s)?;

        let mut g_blocks = BlockSeries::new(m)?;
        g_blocks.push(g0.clone())?;
        g_blocks.cache_transform(ctx, 0)?;
        let u_transform = ctx.forward_transform(u.coeffs(), 2 * m)?;
        for k in 0..s {
            df_blocks.cache_transform(ctx, k)?;
        }

        Ok(ExpState {
            s,
            m,
            f_blocks,
            df_blocks,
            g_blocks,
            u_block: u.clone(),
            u_transform,
            q_blocks: BlockSeries::new(m)?,
            eps_blocks: BlockSeries::new(m)?,
            phase: Phase::Prepared,
        })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn g_blocks(&self) -> &BlockSeries {
        &self.g_blocks
    }

    pub fn q_blocks(&self) -> &BlockSeries {
        &self.q_blocks
    }

    pub fn eps_blocks(&self) -> &BlockSeries {
        &self.eps_blocks
    }

    pub fn u_block(&self) -> &Block {
        &self.u_block
    }

    fn expect_phase(&self, want: Phase, op: &str) -> Result<()> {
        if self.phase == want {
            Ok(())
        } else {
            Err(Error::Contract(format!(
                "{op} called in phase {:?}, expected {want:?}",
                self.phase
            )))
        }
    }

    /// Blocks `g_[1..s)` of `exp(f)`, each with its transform cached.
    /// Uses `6(s − 1)` transforms.
    pub fn phase1_first_half(&mut self, ctx: &mut FftContext) -> Result<()> {
        self.expect_phase(Phase::Prepared, "phase1_first_half")?;
        let len = 2 * self.m;
        for k in 1..self.s {
            // g_blocks holds exactly g_[0..k), so g_[k] contributes nothing.
            let psi = block_product(ctx, &self.g_blocks, &self.df_blocks, k)?;
            let psi_t = ctx.forward_transform(psi.coeffs(), len)?;
            // φ = u·ψ mod X = δ_k(g_[k]·u mod X)
            let phi = pointwise_low_half(ctx, &self.u_transform, &psi_t)?;
            let w = delta_k_inverse(&phi, k)?;
            let w_t = ctx.forward_transform(w.coeffs(), len)?;
            let g0_t = self.g_blocks.transform(0).ok_or(Error::MissingCache(0))?;
            let gk = pointwise_low_half(ctx, g0_t, &w_t)?;
            let idx = self.g_blocks.push(gk)?;
            self.g_blocks.cache_transform(ctx, idx)?;
        }
        ensure_finite(&self.g_blocks, "first half of exp")?;
        self.phase = Phase::FirstHalf;
        Ok(())
    }

    /// Blocks `q_[0..2s)` of `δg₀/g₀ mod X^{2s}`, where `g₀` is the first
    /// half computed by phase 1. The low half reuses `(δf)_[k]` and its
    /// transforms; the upper half uses `4s` transforms.
    pub fn phase2_quotient(&mut self, ctx: &mut FftContext) -> Result<()> {
        self.expect_phase(Phase::FirstHalf, "phase2_quotient")?;
        let len = 2 * self.m;
        self.q_blocks = self.df_blocks.clone();
        for k in self.s..2 * self.s {
            // (q·g₀)_[k] = (δg₀)_[k] = 0 for k ≥ s
            let psi = block_product(ctx, &self.q_blocks, &self.g_blocks, k)?;
            let psi_t = ctx.forward_transform(psi.coeffs(), len)?;
            let qk = pointwise_low_half(ctx, &self.u_transform, &psi_t)?.neg();
            let idx = self.q_blocks.push(qk)?;
            self.q_blocks.cache_transform(ctx, idx)?;
        }
        ensure_finite(&self.q_blocks, "logarithmic derivative")?;
        self.phase = Phase::Quotient;
        Ok(())
    }

    /// `ε_[k] = δ_{k+s}⁻¹ q_[k+s] − f_[k+s]` and `g_[k+s] = −(g₀·ε)_[k]`
    /// for `k < s`. Uses `2s` transforms.
    ///
    /// The product takes `g_[0..=k]`: `exp(f) = g₀·(1 − ε·X^s) mod X^{2s}`
    /// needs the `g_[k]·ε_[0]` term.
    pub fn phase3_correction(&mut self, ctx: &mut FftContext) -> Result<()> {
        self.expect_phase(Phase::Quotient, "phase3_correction")?;
        let s = self.s;
        let mut eps = BlockSeries::new(self.m)?;
        for k in 0..s {
            let lifted = delta_k_inverse(self.q_blocks.block(k + s)?, k + s)?;
            eps.push(lifted.sub(self.f_blocks.block(k + s)?)?)?;
        }
        for k in 0..s {
            eps.cache_transform(ctx, k)?;
        }
        let upper = (0..s)
            .map(|k| block_product(ctx, &self.g_blocks, &eps, k).map(|b| b.neg()))
            .collect::<Result<Vec<_>>>()?;
        for block in upper {
            self.g_blocks.push(block)?;
        }
        self.eps_blocks = eps;
        ensure_finite(&self.g_blocks, "exp")?;
        self.phase = Phase::Done;
        Ok(())
    }

    /// `exp(f) mod x^{2sm}`, once all three phases have run.
    pub fn into_series(self) -> Result<Series> {
        self.expect_phase(Phase::Done, "into_series")?;
        Ok(self.g_blocks.join_blocks())
    }
}

fn ensure_finite(b: &BlockSeries, what: &'static str) -> Result<()> {
    if b.blocks().iter().all(Block::is_finite) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

fn check_base_case(f: &[Complex64], g0: &Block, u: &Block) -> Result<()> {
    let m = g0.m();
    let low = &f[..f.len().min(m)];
    let want_g0 = naive_exp(low, m)?;
    let neg_low: Vec<Complex64> = low.iter().map(|c| -c).collect();
    let want_u = naive_exp(&neg_low, m)?;
    let err_g0 = max_abs_diff(g0.coeffs(), &want_g0);
    if err_g0 > BASE_CASE_TOL * (1.0 + want_g0.max_abs()) {
        return Err(Error::Contract(format!(
            "g0 differs from exp(f mod x^m) by {err_g0:e}"
        )));
    }
    let err_u = max_abs_diff(u.coeffs(), &want_u);
    if err_u > BASE_CASE_TOL * (1.0 + want_u.max_abs()) {
        return Err(Error::Contract(format!(
            "u differs from exp(-f mod x^m) by {err_u:e}"
        )));
    }
    Ok(())
}

/// `exp(f) mod x^{2sm}` from the first block `g0 = exp(f) mod x^m` and
/// `u = 1/g0 mod x^m`. Consumes exactly `13s − 4` transforms of length
/// `2m` from `ctx`.
pub fn algorithm1_exp(
    ctx: &mut FftContext,
    s: usize,
    f: &[Complex64],
    g0: &Block,
    u: &Block,
) -> Result<Series> {
    let mut state = ExpState::new(ctx, s, f, g0, u)?;
    state.phase1_first_half(ctx)?;
    state.phase2_quotient(ctx)?;
    state.phase3_correction(ctx)?;
    state.into_series()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    fn exp_x_state(ctx: &mut FftContext, s: usize) -> ExpState {
        let g0 = Block::new(re(&[1.0, 1.0])).unwrap();
        let u = Block::new(re(&[1.0, -1.0])).unwrap();
        ExpState::new(ctx, s, &re(&[0.0, 1.0]), &g0, &u).unwrap()
    }

    #[test]
    fn phase1_with_single_block_is_empty() {
        let mut ctx = FftContext::new(4).unwrap();
        let mut st = exp_x_state(&mut ctx, 1);
        let before = ctx.snapshot_counts();
        st.phase1_first_half(&mut ctx).unwrap();
        assert!(ctx.snapshot_counts().since(&before).is_zero());
        assert_eq!(st.g_blocks().len(), 1);
    }

    #[test]
    fn phase1_exp_x_second_block() {
        let mut ctx = FftContext::new(4).unwrap();
        let mut st = exp_x_state(&mut ctx, 2);
        st.phase1_first_half(&mut ctx).unwrap();
        let g1 = st.g_blocks().block(1).unwrap();
        assert!(close(g1.coeffs(), &re(&[0.5, 1.0 / 6.0]), 1e-15));
    }

    #[test]
    fn phase2_exp_x_quotient() {
        let mut ctx = FftContext::new(4).unwrap();
        let mut st = exp_x_state(&mut ctx, 1);
        st.phase1_first_half(&mut ctx).unwrap();
        st.phase2_quotient(&mut ctx).unwrap();
        // x/(1+x) mod x^4
        let q = st.q_blocks().join_blocks();
        assert!(close(&q, &re(&[0.0, 1.0, -1.0, 1.0]), 1e-15));
    }

    #[test]
    fn phase3_exp_x_correction() {
        let mut ctx = FftContext::new(4).unwrap();
        let mut st = exp_x_state(&mut ctx, 1);
        st.phase1_first_half(&mut ctx).unwrap();
        st.phase2_quotient(&mut ctx).unwrap();
        st.phase3_correction(&mut ctx).unwrap();
        let eps = st.eps_blocks().block(0).unwrap();
        assert!(close(eps.coeffs(), &re(&[-0.5, 1.0 / 3.0]), 1e-15));
        let g1 = st.g_blocks().block(1).unwrap();
        assert!(close(g1.coeffs(), &re(&[0.5, 1.0 / 6.0]), 1e-15));
    }

    #[test]
    fn zero_input_gives_one() {
        let mut ctx = FftContext::new(8).unwrap();
        let g0 = Block::new(re(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        let mut st = ExpState::new(&mut ctx, 2, &[], &g0, &g0).unwrap();
        st.phase1_first_half(&mut ctx).unwrap();
        st.phase2_quotient(&mut ctx).unwrap();
        assert!(st.q_blocks().join_blocks().iter().all(|c| c.norm() == 0.0));
        st.phase3_correction(&mut ctx).unwrap();
        assert!(st.eps_blocks().join_blocks().iter().all(|c| c.norm() == 0.0));
        let g = st.into_series().unwrap();
        assert!(close(&g, &Series::one(16), 0.0));
    }

    #[test]
    fn phases_must_run_in_order() {
        let mut ctx = FftContext::new(4).unwrap();
        let mut st = exp_x_state(&mut ctx, 2);
        assert!(matches!(st.phase2_quotient(&mut ctx), Err(Error::Contract(_))));
        assert!(matches!(st.clone().into_series(), Err(Error::Contract(_))));
        st.phase1_first_half(&mut ctx).unwrap();
        assert!(matches!(st.phase1_first_half(&mut ctx), Err(Error::Contract(_))));
    }

    #[test]
    fn input_contract_violations() {
        let mut ctx = FftContext::new(4).unwrap();
        let g0 = Block::new(re(&[1.0, 1.0])).unwrap();
        let u = Block::new(re(&[1.0, -1.0])).unwrap();
        let f = re(&[0.0, 1.0]);
        assert!(matches!(
            ExpState::new(&mut ctx, 0, &f, &g0, &u),
            Err(Error::Contract(_))
        ));
        assert_eq!(
            ExpState::new(&mut ctx, 1, &re(&[1.0, 1.0]), &g0, &u).unwrap_err(),
            Error::NonzeroConstantTerm
        );
        let wrong_u = Block::new(re(&[1.0, 1.0])).unwrap();
        assert!(matches!(
            ExpState::new(&mut ctx, 1, &f, &g0, &wrong_u),
            Err(Error::Contract(_))
        ));
        let big = Block::new(re(&[1.0, 1.0, 0.5, 0.0])).unwrap();
        assert!(matches!(
            ExpState::new(&mut ctx, 1, &f, &big, &big),
            Err(Error::UnsupportedLength(8))
        ));
        // nothing was transformed on any rejected input
        assert!(ctx.snapshot_counts().is_zero());
    }

    #[test]
    fn exp_x_four_coefficients() {
        let mut ctx = FftContext::new(4).unwrap();
        let g0 = Block::new(re(&[1.0, 1.0])).unwrap();
        let u = Block::new(re(&[1.0, -1.0])).unwrap();
        let g = algorithm1_exp(&mut ctx, 1, &re(&[0.0, 1.0]), &g0, &u).unwrap();
        assert!(close(&g, &re(&[1.0, 1.0, 0.5, 1.0 / 6.0]), 1e-15));
        assert_eq!(ctx.snapshot_counts().total_at(4), 9);
    }
}
