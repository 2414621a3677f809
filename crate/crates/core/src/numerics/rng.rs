//! Counter-based per-trajectory random streams.
//!
//! Trajectory `i` of a run seeded with `seed` always draws from ChaCha8 stream
//! `i` under key `seed`, regardless of which worker thread executes it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrajectoryRng = ChaCha8Rng;

pub fn trajectory_rng(seed: u64, index: u64) -> TrajectoryRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
