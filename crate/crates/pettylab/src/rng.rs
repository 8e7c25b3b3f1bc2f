//! Deterministic randomness: a single master seed, named substreams.
//!
//! Every stochastic routine takes its stream from here. The stream id is the
//! FNV-1a hash of a stable tag, so adding new consumers never perturbs
//! existing ones, and reruns with the same master seed are bit-identical.

use crate::scalar::{inv_std_normal, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct SeedSplitter {
    pub master: u64,
}

impl SeedSplitter {
    pub fn new(master: u64) -> Self {
        SeedSplitter { master }
    }

    pub fn stream(&self, tag: &str) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(fnv1a(tag.as_bytes()));
        rng
    }

    pub fn substream(&self, tag: &str, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        let mut h = fnv1a(tag.as_bytes());
        h ^= index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        rng.set_stream(h);
        rng
    }
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

/// Uniform direction on S^{d-1} via the Gaussian construction.
pub fn uniform_direction<R: Real>(rng: &mut impl Rng, d: usize) -> Vec<R> {
    loop {
        let v: Vec<R> = (0..d)
            .map(|_| inv_std_normal(R::of(rng.gen_range(0.0..1.0f64))))
            .collect();
        let n = crate::geom::norm(&v);
        if n > R::of(1e-8) {
            return crate::geom::scaled(&v, n.recip());
        }
    }
}

/// Uniform point in the centered box with per-coordinate half-widths.
pub fn uniform_in_box<R: Real>(rng: &mut impl Rng, half: &[R]) -> Vec<R> {
    half.iter()
        .map(|&h| R::of(rng.gen_range(-1.0..1.0f64)) * h)
        .collect()
}
