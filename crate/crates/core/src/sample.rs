//! Seeded random sampling used by property checks and the CLI.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero rational with numerator in `[-bound, bound]` and denominator in
/// `[1, bound]`.
pub fn nonzero_scalar(rng: &mut SampleRng, bound: i64) -> Scalar {
    loop {
        let num = rng.gen_range(-bound..=bound);
        if num != 0 {
            return Scalar::new(num, rng.gen_range(1..=bound));
        }
    }
}

/// `count` distinct items chosen from `pool` (fewer if the pool is small).
pub fn choose_distinct<T: Clone>(rng: &mut SampleRng, pool: &[T], count: usize) -> Vec<T> {
    pool.choose_multiple(rng, count.min(pool.len())).cloned().collect()
}

pub fn choose<'a, T>(rng: &mut SampleRng, pool: &'a [T]) -> &'a T {
    pool.choose(rng).expect("empty pool")
}
