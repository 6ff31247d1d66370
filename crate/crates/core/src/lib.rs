//! Exponentials of truncated complex power series.
//!
//! The fast path splits a series into blocks of size `m`, caches the
//! length-`2m` Fourier transform of each block, and extracts single blocks
//! of products with one inverse transform each. The exponential to order
//! `2sm` then costs exactly `13s − 4` transforms of length `2m`; every
//! transform is counted so that figure can be checked directly.
//!
//! [`oracle`] holds the quadratic reference routines the fast path is
//! tested against.

pub mod blockseries;
pub mod cli;
pub mod driver;
pub mod error;
pub mod expcore;
pub mod oracle;
pub mod series;
pub mod transform;

pub use blockseries::{block_product, delta, delta_k_apply, delta_k_inverse, Block, BlockSeries};
pub use driver::{
    exp_series, exp_series_planned, exp_series_with, newton_reciprocal, plan_parameters,
    plan_with_blocks, BlockPlan, ExpConfig, ExpOutcome, ExpPlan,
};
pub use error::{Error, Result};
pub use expcore::{algorithm1_exp, ExpState};
pub use num_complex::Complex64;
pub use oracle::{naive_exp, naive_log, naive_mul, naive_reciprocal};
pub use series::Series;
pub use transform::{CountReport, FftContext, Transform};
