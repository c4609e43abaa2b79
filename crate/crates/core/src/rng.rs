//! Seeded random sources.
//!
//! Every Monte Carlo run owns a ChaCha8 generator. Run `k` of an experiment
//! with master seed `s` uses the generator seeded with `s` and switched to
//! stream `k`, so runs are independent, reproducible, and can execute in any
//! order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Generator for run `run_index` under `master_seed`.
pub fn run_rng(master_seed: u64, run_index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(run_index);
    rng
}

/// Stream reserved for auxiliary draws that must not collide with run streams
/// (e.g. a random cluster basis shared by all runs).
pub fn aux_rng(master_seed: u64) -> SimRng {
    run_rng(master_seed, u64::MAX)
}
