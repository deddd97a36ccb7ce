//! Seeded random streams.
//!
//! Every stochastic routine takes its randomness from ChaCha20 (the
//! `rand_chacha` implementation), keyed by a 64-bit seed. Sample `i` of a
//! campaign uses stream `i` of that key, so results do not depend on how the
//! samples are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type StreamRng = ChaCha20Rng;

/// Generator for stream `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
