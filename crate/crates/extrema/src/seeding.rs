//! Reproducible random streams for trial-parallel experiments.
//!
//! Every trial of every experiment draws from its own ChaCha stream keyed
//! by `(seed, trial index)`. Streams are independent by construction, so
//! experiments can run trials on any number of threads in any order and
//! still produce bit-identical results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG for one trial: stream `stream` of the generator seeded by `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a sub-seed for a named phase of an experiment, so that phases
/// sharing a user seed do not share streams.
pub fn derive_seed(seed: u64, tag: &str) -> u64 {
    // FNV-1a over the tag, then a splitmix64 finalizer mixing in the seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in tag.as_bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
