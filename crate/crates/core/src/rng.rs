//! Seeded randomness.
//!
//! Every random draw in this crate comes from ChaCha8 (`rand_chacha`) keyed by
//! `seed_from_u64(seed)`; independent shards of one run use the same key with
//! the ChaCha stream id set to the shard counter. Reports record the seed, so
//! any run can be reproduced from its configuration alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
