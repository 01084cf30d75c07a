//! Deterministic random source for instance generation.
//!
//! Instances must be bit-reproducible across platforms from `(params, seed)`,
//! so the generator and every value transform are pinned here rather than
//! delegated to distribution crates whose internals may change:
//!
//! * stream: ChaCha20 keyed via `seed_from_u64`,
//! * uniform in `[0, 1)`: top 53 bits of a `u64`, scaled by `2^-53`,
//! * uniform in `(0, 1]`: same with `+1` before scaling,
//! * standard normal: Box-Muller on one `(0,1]` and one `[0,1)` draw,
//!   consuming exactly two `u64` per pair (the second value is cached),
//! * integer range: Lemire-style rejection on the high 64-bit product.
//!
//! The identifier [`RNG_ID`] is recorded in instance manifests.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

/// Identifies the generator + transform scheme in serialized metadata.
pub const RNG_ID: &str = "chacha20/box-muller/v1";

pub struct DeterministicRng {
    inner: ChaCha20Rng,
    cached_normal: Option<f64>,
}

impl DeterministicRng {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            inner: ChaCha20Rng::seed_from_u64(seed),
            cached_normal: None,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53-bit resolution.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`; safe as a logarithm argument.
    #[inline]
    fn uniform_open_zero(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[-a, a]`.
    #[inline]
    pub fn uniform_symmetric(&mut self, a: f64) -> f64 {
        a * (2.0 * self.uniform() - 1.0)
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.cached_normal.take() {
            return z;
        }
        let u1 = self.uniform_open_zero();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.cached_normal = Some(r * angle.sin());
        r * angle.cos()
    }

    /// Uniform integer in `[0, bound)` without modulo bias.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        loop {
            let x = self.next_u64();
            let (hi, lo) = {
                let wide = (x as u128) * (bound as u128);
                ((wide >> 64) as u64, wide as u64)
            };
            // Rejection zone keeps the distribution exactly uniform.
            if lo < bound {
                let threshold = bound.wrapping_neg() % bound;
                if lo < threshold {
                    continue;
                }
            }
            return hi;
        }
    }

    /// Draws `count` distinct values from `[0, total)`, returned sorted.
    ///
    /// Uses rejection sampling when the requested set is sparse and a partial
    /// Fisher-Yates shuffle otherwise; both paths consume the stream
    /// deterministically.
    pub fn distinct_below(&mut self, total: usize, count: usize) -> Vec<usize> {
        assert!(count <= total, "cannot draw {count} distinct from {total}");
        let mut picked: Vec<usize>;
        if count * 8 <= total {
            let mut seen = std::collections::HashSet::with_capacity(count * 2);
            picked = Vec::with_capacity(count);
            while picked.len() < count {
                let v = self.below(total as u64) as usize;
                if seen.insert(v) {
                    picked.push(v);
                }
            }
        } else {
            let mut pool: Vec<usize> = (0..total).collect();
            for k in 0..count {
                let j = k + self.below((total - k) as u64) as usize;
                pool.swap(k, j);
            }
            pool.truncate(count);
            picked = pool;
        }
        picked.sort_unstable();
        picked
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let mut a = DeterministicRng::from_seed(7);
        let mut b = DeterministicRng::from_seed(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = DeterministicRng::from_seed(8);
        assert_ne!(a.next_u64(), c.next_u64());
    }

    #[test]
    fn normal_moments_are_plausible() {
        let mut rng = DeterministicRng::from_seed(1);
        let n = 200_000;
        let (mut sum, mut sumsq) = (0.0, 0.0);
        for _ in 0..n {
            let z = rng.normal();
            sum += z;
            sumsq += z * z;
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn distinct_below_is_exact_and_sorted() {
        let mut rng = DeterministicRng::from_seed(3);
        let s = rng.distinct_below(1000, 900); // shuffle path
        assert_eq!(s.len(), 900);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        let t = rng.distinct_below(100_000, 50); // rejection path
        assert_eq!(t.len(), 50);
        assert!(t.windows(2).all(|w| w[0] < w[1]));
        assert!(t.iter().all(|&v| v < 100_000));
    }

    #[test]
    fn below_is_within_bounds() {
        let mut rng = DeterministicRng::from_seed(9);
        for _ in 0..1000 {
            assert!(rng.below(7) < 7);
        }
    }
}
