//! Seeded random streams.
//!
//! Every stream is a ChaCha8 generator keyed by a 64-bit seed and a stream
//! id. Gaussian draws always consume exactly two `u64` words, so the `k`-th
//! Gaussian of a stream sits at a fixed word position and can be regenerated
//! on demand without replaying the stream.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::math::{cos, ln, sqrt, PI};

/// 4 ChaCha words (two u64) per Gaussian.
const WORDS_PER_GAUSSIAN: u128 = 4;

#[derive(Clone, Debug)]
pub struct Stream {
    inner: ChaCha8Rng,
}

impl Stream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner }
    }

    /// Stream keyed by `(master, index)` through a splitmix-derived seed.
    pub fn derived(master: u64, index: u64) -> Self {
        Self::new(derive_seed(master, index), 0)
    }

    /// Uniform on `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        ((self.inner.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard Gaussian by Box-Muller, cosine branch only.
    #[inline]
    pub fn gaussian(&mut self) -> f64 {
        let u1 = self.uniform_open();
        let u2 = self.uniform();
        sqrt(-2.0 * ln(u1)) * cos(2.0 * PI * u2)
    }

    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Uniform integer in `0..bound` (bound > 0), by rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
        loop {
            let v = self.inner.next_u64();
            if v <= zone {
                return v % bound;
            }
        }
    }

    pub fn fill_gaussian(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.gaussian();
        }
    }

    /// Position the stream so that the next Gaussian is the `index`-th one.
    pub fn seek_gaussian(&mut self, index: u64) {
        self.inner.set_word_pos(index as u128 * WORDS_PER_GAUSSIAN);
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

impl RngCore for Stream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// splitmix64 finalizer applied to `master ^ golden * (index + 1)`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform point on the sphere of radius `sqrt(n)`.
pub fn uniform_sphere(n: usize, rng: &mut Stream) -> alloc::vec::Vec<f64> {
    let mut x = alloc::vec![0.0; n];
    loop {
        rng.fill_gaussian(&mut x);
        let norm = crate::math::norm(&x);
        if norm > 0.0 {
            let s = sqrt(n as f64) / norm;
            x.iter_mut().for_each(|v| *v *= s);
            return x;
        }
    }
}
