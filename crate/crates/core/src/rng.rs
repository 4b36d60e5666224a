//! Seeded, counter-based random streams.
//!
//! Every random quantity in the crate comes from [`CounterRng`], a SplitMix64
//! generator in counter form: the `i`-th output of a stream with key `k` is
//!
//! ```text
//! mix(k + i * 0x9E37_79B9_7F4A_7C15)        (wrapping u64 arithmetic, i = 1, 2, ...)
//! mix(z) = z ^= z >> 30; z *= 0xBF58_476D_1CE4_E5B9;
//!          z ^= z >> 27; z *= 0x94D0_49BB_1331_11EB;
//!          z ^ (z >> 31)
//! ```
//!
//! Uniforms take the top 53 bits of an output (`u >> 11` scaled by 2^-53), and
//! standard normals use the cosine branch of Box-Muller on two consecutive
//! uniforms. Sub-streams are keyed with [`derive_seed`], which folds a list of
//! integer tags into a base seed with the same `mix` function, so that
//! replicate `r` of experiment `e` never depends on how many other streams
//! were drawn before it.

use serde::{Deserialize, Serialize};

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// A 64-bit seed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

#[inline]
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `tags` into `base`: `h = mix(h ^ mix(tag + GAMMA))` for each tag in order.
pub fn derive_seed(base: Seed, tags: &[u64]) -> Seed {
    let mut h = mix(base.0);
    for &t in tags {
        h = mix(h ^ mix(t.wrapping_add(GAMMA)));
    }
    Seed(h)
}

#[derive(Clone, Debug)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: Seed) -> Self {
        CounterRng {
            key: seed.0,
            counter: 0,
        }
    }

    /// Stream keyed by `derive_seed(base, tags)`.
    pub fn derived(base: Seed, tags: &[u64]) -> Self {
        Self::new(derive_seed(base, tags))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GAMMA)))
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    #[inline]
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform integer in `0..n` (Lemire's multiply-shift, negligible bias for n << 2^64).
    #[inline]
    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
