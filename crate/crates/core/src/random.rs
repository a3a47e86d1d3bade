//! Seeded sampling of the integer coefficients used by the randomized
//! stages.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default number of attempts for each randomized stage.
pub const DEFAULT_RETRY_BUDGET: usize = 32;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Upper end of the sampling range `{1, ..., 8 n p r}`.
pub fn coefficient_range(n: usize, p: usize, r: usize) -> u64 {
    (8 * n * p * r).max(2) as u64
}

/// `len` draws, uniform on `{1, ..., range}`.
pub fn draw_coefficients(rng: &mut impl Rng, len: usize, range: u64) -> Vec<i64> {
    (0..len).map(|_| rng.gen_range(1..=range) as i64).collect()
}

/// `len` draws, uniform on `{-bound, ..., bound}`.
pub fn draw_symmetric(rng: &mut impl Rng, len: usize, bound: i64) -> Vec<i64> {
    (0..len).map(|_| rng.gen_range(-bound..=bound)).collect()
}
