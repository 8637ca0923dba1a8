//! Generators, randomized baselines, and the experiment runner.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub mod baselines;
pub mod experiment;
pub mod generators;
pub mod registry;

/// The crate-wide seeded generator: ChaCha8 seeded from a `u64` via
/// `seed_from_u64`, so streams are portable across platforms.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
