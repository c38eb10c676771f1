//! Labeled RNG substreams.
//!
//! One global seed fans out to independent streams keyed by a label and an
//! index, so generation, exploration and simulation can be re-run in
//! isolation without perturbing each other.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Stream `index` of the substream family `label` under `seed`.
pub fn substream(seed: u64, label: &str, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(fnv1a(label))));
    rng.set_stream(index);
    rng
}

/// Derive a child seed, for handing a labeled seed to an API that takes `u64`.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    splitmix64(seed ^ splitmix64(fnv1a(label)).rotate_left(17))
}
