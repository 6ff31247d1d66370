//! Block decomposition `f = f_[0] + f_[1]·X + f_[2]·X² + …` with `X = x^m`,
//! per-block transform caching, and the single-block product.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::Series;
use crate::transform::{FftContext, Transform};

/// One `X`-block: exactly `m` coefficients, coefficient `j` of `x^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    coeffs: Vec<Complex64>,
}

impl Block {
    /// Wraps `coeffs`; the block size is their count.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Contract("block size must be at least 1".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("block"));
        }
        Ok(Block { coeffs })
    }

    pub fn zeros(m: usize) -> Self {
        Block {
            coeffs: vec![Complex64::new(0.0, 0.0); m.max(1)],
        }
    }

    /// The first `m` coefficients of `f`, zero-padded.
    pub fn from_prefix(f: &[Complex64], m: usize) -> Result<Self> {
        let mut coeffs: Vec<Complex64> = f.iter().take(m).copied().collect();
        coeffs.resize(m, Complex64::new(0.0, 0.0));
        Block::new(coeffs)
    }

    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn neg(&self) -> Block {
        Block {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Block) -> Result<Block> {
        if self.m() != other.m() {
            return Err(Error::BlockSizeMismatch {
                expected: self.m(),
                got: other.m(),
            });
        }
        Ok(Block {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }
}

/// A series held as a list of blocks of size `m`, each with an optional
/// write-once length-`2m` transform.
///
/// Blocks past the end of the list are zero: a `BlockSeries` with `n`
/// blocks represents a polynomial of degree `< n·m`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSeries {
    m: usize,
    blocks: Vec<Block>,
    cached: Vec<Option<Transform>>,
}

impl BlockSeries {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Contract("block size must be at least 1".into()));
        }
        Ok(BlockSeries {
            m,
            blocks: Vec::new(),
            cached: Vec::new(),
        })
    }

    /// Splits `f` into exactly `nblocks` blocks of size `m`, zero-padding the
    /// tail. A series that does not fit is an error, never silently cut.
    pub fn split_blocks(f: &[Complex64], m: usize, nblocks: usize) -> Result<Self> {
        let mut out = BlockSeries::new(m)?;
        if f.len() > m * nblocks {
            return Err(Error::SeriesTooLong {
                len: f.len(),
                m,
                nblocks,
            });
        }
        for i in 0..nblocks {
            let start = (i * m).min(f.len());
            out.push(Block::from_prefix(&f[start..], m)?)?;
        }
        Ok(out)
    }

    /// Concatenated block coefficients.
    pub fn join_blocks(&self) -> Series {
        self.blocks.iter().flat_map(|b| b.coeffs.iter().copied()).collect()
    }

    /// Concatenation of the first `count` blocks.
    pub fn join_prefix(&self, count: usize) -> Series {
        self.blocks
            .iter()
            .take(count)
            .flat_map(|b| b.coeffs.iter().copied())
            .collect()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> Result<&Block> {
        self.blocks.get(k).ok_or(Error::BlockOutOfRange {
            index: k,
            len: self.blocks.len(),
        })
    }

    pub fn transform(&self, k: usize) -> Option<&Transform> {
        self.cached.get(k).and_then(Option::as_ref)
    }

    pub fn is_cached(&self, k: usize) -> bool {
        self.transform(k).is_some()
    }

    fn cached_transform(&self, k: usize) -> Result<&Transform> {
        self.transform(k).ok_or(Error::MissingCache(k))
    }

    /// Appends a block without a transform; returns its index.
    pub fn push(&mut self, block: Block) -> Result<usize> {
        if block.m() != self.m {
            return Err(Error::BlockSizeMismatch {
                expected: self.m,
                got: block.m(),
            });
        }
        self.blocks.push(block);
        self.cached.push(None);
        Ok(self.blocks.len() - 1)
    }

    /// Appends a block together with an already-known transform of it.
    pub fn push_with_transform(&mut self, block: Block, transform: Transform) -> Result<usize> {
        if transform.len() != 2 * self.m {
            return Err(Error::Contract(format!(
                "cached transform has length {}, expected {}",
                transform.len(),
                2 * self.m
            )));
        }
        let k = self.push(block)?;
        self.cached[k] = Some(transform);
        Ok(k)
    }

    /// Computes and stores the length-`2m` transform of block `k`.
    /// Each block may be transformed at most once.
    pub fn cache_transform(&mut self, ctx: &mut FftContext, k: usize) -> Result<()> {
        let block = self.block(k)?;
        if self.cached[k].is_some() {
            return Err(Error::AlreadyCached(k));
        }
        let t = ctx.forward_transform(block.coeffs(), 2 * self.m)?;
        self.cached[k] = Some(t);
        Ok(())
    }
}

/// Block `k` of the full product `a·b`, from cached transforms and a single
/// inverse transform.
///
/// With `A_i`, `B_i` the length-`2m` transforms of the zero-padded blocks,
/// the block is the low half of
/// `F⁻¹(Σ_{i+i'=k} A_i·B_{i'} + (−1)^j·Σ_{i+i'=k−1} A_i·B_{i'})`:
/// `(−1)^j` is the transform of `x^m`, which rotates the high halves of the
/// previous diagonal into the low half. The high half of the inverse is
/// discarded.
pub fn block_product(
    ctx: &mut FftContext,
    a: &BlockSeries,
    b: &BlockSeries,
    k: usize,
) -> Result<Block> {
    if a.m != b.m {
        return Err(Error::BlockSizeMismatch {
            expected: a.m,
            got: b.m,
        });
    }
    let m = a.m;
    let len = 2 * m;
    let zero = Complex64::new(0.0, 0.0);

    let diagonal = |d: usize| -> Result<Vec<(&Transform, &Transform)>> {
        let mut terms = Vec::new();
        for i in 0..=d.min(a.len().saturating_sub(1)) {
            let ip = d - i;
            if i < a.len() && ip < b.len() {
                terms.push((a.cached_transform(i)?, b.cached_transform(ip)?));
            }
        }
        Ok(terms)
    };
    let current = diagonal(k)?;
    let carried = if k > 0 { diagonal(k - 1)? } else { Vec::new() };

    let mut acc = vec![zero; len];
    for (ta, tb) in current {
        for ((p, x), y) in acc.iter_mut().zip(ta.values()).zip(tb.values()) {
            *p += x * y;
        }
    }
    if !carried.is_empty() {
        let mut carry = vec![zero; len];
        for (ta, tb) in carried {
            for ((p, x), y) in carry.iter_mut().zip(ta.values()).zip(tb.values()) {
                *p += x * y;
            }
        }
        for (j, (p, c)) in acc.iter_mut().zip(carry).enumerate() {
            if j % 2 == 0 {
                *p += c;
            } else {
                *p -= c;
            }
        }
    }

    let mut out = ctx.inverse_transform(&Transform::from_values(acc)?)?;
    out.truncate(m);
    Block::new(out)
}

/// `a·b mod X` for two blocks given by their transforms: one inverse
/// transform, low half kept.
pub fn pointwise_low_half(ctx: &mut FftContext, a: &Transform, b: &Transform) -> Result<Block> {
    let mut out = ctx.inverse_transform(&a.pointwise_mul(b)?)?;
    out.truncate(a.len() / 2);
    Block::new(out)
}

/// `δf = x·f'(x)`: coefficient `j` scaled by `j`.
pub fn delta(f: &[Complex64]) -> Series {
    f.iter().enumerate().map(|(j, &c)| c * j as f64).collect()
}

/// `δ_k b = X^{-k}·δ(X^k·b)`: coefficient `j` scaled by `k·m + j`.
pub fn delta_k_apply(b: &Block, k: usize) -> Block {
    let m = b.m();
    Block {
        coeffs: b
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| c * (k * m + j) as f64)
            .collect(),
    }
}

/// Inverse of [`delta_k_apply`]. For `k = 0` the constant coefficient must
/// vanish (within `1e-12`) and maps to zero.
pub fn delta_k_inverse(b: &Block, k: usize) -> Result<Block> {
    let m = b.m();
    if k == 0 && b.coeffs[0].norm() > 1e-12 {
        return Err(Error::NonIntegrableConstant);
    }
    Ok(Block {
        coeffs: b
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| match k * m + j {
                0 => Complex64::new(0.0, 0.0),
                w => c / w as f64,
            })
            .collect(),
    })
}
