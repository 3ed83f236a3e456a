//! Deterministic per-index random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent generator for sample `index` of stream `stream` under `seed`.
///
/// Streams separate unrelated consumers (plane samples, descent starts,
/// group elements) so adding work to one never perturbs another.
pub fn stream_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let key = mix64(mix64(seed ^ mix64(stream)) ^ index);
    ChaCha8Rng::seed_from_u64(key)
}

pub fn normal_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

pub mod streams {
    pub const PLANES: u64 = 1;
    pub const DESCENT_STARTS: u64 = 2;
    pub const GROUP: u64 = 3;
    pub const SAMPLER: u64 = 4;
    pub const AUDIT: u64 = 5;
    pub const FATNESS: u64 = 6;
}
