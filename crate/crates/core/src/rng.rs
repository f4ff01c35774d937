//! Reproducible random streams.
//!
//! Every random quantity comes from ChaCha20 keyed by a 64-bit seed. Work is
//! cut into fixed-size chunks and chunk `c` reads stream `c`, so results do
//! not depend on how many threads run the chunks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

/// Samples per parallel chunk. Changing it changes every seeded result.
pub const CHUNK: usize = 4096;

/// Distinct purposes drawing from one user seed get distinct keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Purpose {
    Neurons = 1,
    Pool = 2,
    Inputs = 3,
    Pilot = 4,
    Evaluation = 5,
    Generator = 6,
}

/// Generator for `purpose` on stream `stream` of `seed`.
pub fn stream(seed: u64, purpose: Purpose, stream: u64) -> ChaCha20Rng {
    let key = seed ^ (purpose as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = ChaCha20Rng::seed_from_u64(key);
    rng.set_stream(stream);
    rng
}

/// Chunk boundaries `[start, end)` covering `0..total`.
pub fn chunks(total: usize) -> impl Iterator<Item = (u64, usize, usize)> {
    (0..total.div_ceil(CHUNK)).map(move |c| {
        let start = c * CHUNK;
        (c as u64, start, (start + CHUNK).min(total))
    })
}

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub fn normal_vec<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim).map(|_| scale * normal(rng)).collect()
}

/// Uniform on the unit sphere in `ℝ^dim`.
pub fn unit_vec<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v = normal_vec(rng, dim, 1.0);
        let n = norm(&v);
        if n > 1e-300 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_distinct_and_repeatable() {
        let a: u64 = stream(7, Purpose::Neurons, 0).random();
        let b: u64 = stream(7, Purpose::Neurons, 0).random();
        let c: u64 = stream(7, Purpose::Neurons, 1).random();
        let d: u64 = stream(7, Purpose::Pool, 0).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn chunks_cover_range() {
        let v: Vec<_> = chunks(2 * CHUNK + 3).collect();
        assert_eq!(v.len(), 3);
        assert_eq!(v[2], (2, 2 * CHUNK, 2 * CHUNK + 3));
        assert_eq!(chunks(0).count(), 0);
    }
}
