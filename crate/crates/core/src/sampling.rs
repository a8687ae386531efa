//! Deterministic seeded sampling.
//!
//! Every verifier and solver draws its randomness from a [`SampleRng`]
//! created from an explicit 64-bit seed, so runs are reproducible. Sample
//! streams are always generated sequentially up front; parallel workers only
//! evaluate the pre-drawn samples, which keeps results independent of the
//! worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{cast, Scalar};

/// Derive a sub-seed from a root seed and a salt (splitmix64 step), so
/// per-restart and per-query streams are unrelated but reproducible.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut x = seed ^ salt.wrapping_mul(0x9e3779b97f4a7c15);
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Seeded random source for sample streams.
#[derive(Debug, Clone)]
pub struct SampleRng {
    rng: ChaCha8Rng,
}

impl SampleRng {
    pub fn seeded(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Derive an independent stream, e.g. one per restart or per query.
    pub fn fork(&self, salt: u64) -> Self {
        let base = self.rng.get_seed();
        Self::seeded(derive_seed(
            u64::from_le_bytes(base[..8].try_into().unwrap()),
            salt,
        ))
    }

    /// Uniform draw in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn uniform<T: Scalar>(&mut self, lo: f64, hi: f64) -> T {
        cast(lo + (hi - lo) * self.unit())
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}

/// Interpolation-parameter stream mixing a fixed grid with uniform draws.
///
/// Even sample indices walk the grid `{0, 1/16, ..., 1}`, odd indices are
/// uniform in `[0, 1]`, so endpoints and dyadic parameters are always hit.
pub fn sample_t<T: Scalar>(rng: &mut SampleRng, index: usize) -> T {
    const GRID: usize = 16;
    if index.is_multiple_of(2) {
        let m = (index / 2) % (GRID + 1);
        cast(m as f64 / GRID as f64)
    } else {
        cast(rng.unit())
    }
}

/// Interpolation parameter restricted to `[lo, hi]`, same grid/uniform mix.
pub fn sample_t_in<T: Scalar>(rng: &mut SampleRng, index: usize, lo: f64, hi: f64) -> T {
    let t: T = sample_t(rng, index);
    cast::<T>(lo) + (cast::<T>(hi) - cast::<T>(lo)) * t
}
