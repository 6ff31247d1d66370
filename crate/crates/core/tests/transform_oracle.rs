use std::f64::consts::PI;

use fastexp::{Complex64, FftContext, Transform};
use proptest::prelude::*;

/// Direct O(L²) DFT with the same root convention.
fn dft(x: &[Complex64], len: usize, sign: f64) -> Vec<Complex64> {
    (0..len)
        .map(|j| {
            x.iter()
                .enumerate()
                .map(|(t, &c)| c * Complex64::from_polar(1.0, sign * 2.0 * PI * (t * j % len) as f64 / len as f64))
                .sum()
        })
        .collect()
}

fn cyclic_convolution(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let len = a.len();
    (0..len)
        .map(|k| (0..len).map(|i| a[i] * b[(len + k - i) % len]).sum())
        .collect()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

#[test]
fn forward_matches_direct_dft() {
    let mut ctx = FftContext::new(64).unwrap();
    for len in [2usize, 4, 8, 16, 64] {
        let x: Vec<Complex64> = (0..len)
            .map(|t| Complex64::new((t as f64 * 0.7).sin(), (t as f64 * 1.3).cos()))
            .collect();
        let got = ctx.forward_transform(&x, len).unwrap();
        assert!(max_diff(got.values(), &dft(&x, len, 1.0)) < 1e-12, "len {len}");
    }
}

#[test]
fn inverse_of_length_eight_forward() {
    let mut ctx = FftContext::new(8).unwrap();
    let x: Vec<Complex64> = (0..8)
        .map(|t| Complex64::new(1.0 / (t + 1) as f64, -(t as f64)))
        .collect();
    let expected_image = dft(&x, 8, 1.0);
    let t = ctx.forward_transform(&x, 8).unwrap();
    assert!(max_diff(t.values(), &expected_image) < 1e-12);
    let back = ctx.inverse_transform(&t).unwrap();
    assert!(max_diff(&back, &x) < 1e-12);
    // the oracle's own inverse agrees
    let oracle_back: Vec<Complex64> = dft(&expected_image, 8, -1.0).iter().map(|c| c / 8.0).collect();
    assert!(max_diff(&back, &oracle_back) < 1e-12);
}

#[test]
fn roundtrip_up_to_two_to_the_sixteen() {
    let mut ctx = FftContext::new(1 << 16).unwrap();
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    for bits in 2..=16 {
        let len = 1usize << bits;
        let scale = 10f64.powi(bits % 4);
        let x: Vec<Complex64> = (0..len).map(|_| Complex64::new(next(), next()) * scale).collect();
        let max_in = x.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let t = ctx.forward_transform(&x, len).unwrap();
        let back = ctx.inverse_transform(&t).unwrap();
        assert!(max_diff(&back, &x) <= 1e-12 * (1.0 + max_in), "len {len}");
    }
}

proptest! {
    #[test]
    fn linearity(f in coeffs(16), g in coeffs(16), a in (-3.0f64..3.0, -3.0f64..3.0), b in (-3.0f64..3.0, -3.0f64..3.0)) {
        let (a, b) = (Complex64::new(a.0, a.1), Complex64::new(b.0, b.1));
        let mut ctx = FftContext::new(16).unwrap();
        let mix: Vec<Complex64> = f.iter().zip(&g).map(|(x, y)| a * x + b * y).collect();
        let lhs = ctx.forward_transform(&mix, 16).unwrap();
        let tf = ctx.forward_transform(&f, 16).unwrap();
        let tg = ctx.forward_transform(&g, 16).unwrap();
        let rhs: Vec<Complex64> = tf.values().iter().zip(tg.values()).map(|(x, y)| a * x + b * y).collect();
        prop_assert!(max_diff(lhs.values(), &rhs) < 1e-12);
    }

    #[test]
    fn convolution_theorem(bits in 1u32..8, f in coeffs(128), g in coeffs(128)) {
        let len = 1usize << bits;
        let (f, g) = (&f[..len], &g[..len]);
        let mut ctx = FftContext::new(len).unwrap();
        let tf = ctx.forward_transform(f, len).unwrap();
        let tg = ctx.forward_transform(g, len).unwrap();
        let got = ctx.inverse_transform(&tf.pointwise_mul(&tg).unwrap()).unwrap();
        prop_assert!(max_diff(&got, &cyclic_convolution(f, g)) < 1e-10);
    }

    #[test]
    fn every_call_bumps_exactly_one_tally(ops in prop::collection::vec((any::<bool>(), 1u32..6), 1..30)) {
        let mut ctx = FftContext::new(32).unwrap();
        for (fwd, bits) in ops {
            let len = 1usize << bits;
            let before = ctx.snapshot_counts();
            if fwd {
                ctx.forward_transform(&[Complex64::new(1.0, 0.0)], len).unwrap();
            } else {
                let t = Transform::from_values(vec![Complex64::new(1.0, 0.0); len]).unwrap();
                ctx.inverse_transform(&t).unwrap();
            }
            let delta = ctx.snapshot_counts().since(&before);
            prop_assert_eq!(delta.total(), 1);
            if fwd {
                prop_assert_eq!(delta.forward_at(len), 1);
            } else {
                prop_assert_eq!(delta.inverse_at(len), 1);
            }
        }
    }
}
