//! Seed plumbing. Every consumer gets its own ChaCha stream so that results
//! depend only on `(seed, purpose)` and never on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Matrix, Vector};

pub const STREAM_DIRECTIONS: u64 = 1;
pub const STREAM_POSITIONS: u64 = 2;
pub const STREAM_TEMPORAL: u64 = 3;
pub const STREAM_OWNER: u64 = 4;
pub const STREAM_CONJ: u64 = 5;

/// RNG for a fixed `(seed, stream)` pair.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Story-local RNG derived from the global seed, the task and the story index.
pub fn story_rng(seed: u64, task: u8, story: usize) -> ChaCha8Rng {
    let mixed = seed ^ (u64::from(task) << 48) ^ 0x9e37_79b9_7f4a_7c15;
    stream_rng(mixed, 1 << 20 | story as u64)
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    Vector::from_fn(dim, |_, _| StandardNormal.sample(rng))
}

pub fn unit_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    loop {
        let v = gaussian_vector(rng, dim);
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of `R`'s diagonal folded back into `Q`.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
    let g = Matrix::from_fn(dim, dim, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}
