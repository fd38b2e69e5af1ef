use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Uniform on the open interval `(0, 1)` with 53 random bits.
pub(crate) fn open01<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

pub(crate) fn exp1<R: RngCore>(rng: &mut R) -> f64 {
    -open01(rng).ln()
}
