//! Deterministic random streams.
//!
//! Every unit of sampled work (one cascade, one RR-set, one possible world) draws from its
//! own ChaCha stream addressed by `(master_seed, domain, index)`. Results therefore do not
//! depend on how work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Domain tags keep unrelated consumers of one master seed apart.
pub mod domain {
    pub const SIMULATE: u64 = 1;
    pub const BOOST_WITHOUT_B: u64 = 2;
    pub const RR_SETS: u64 = 3;
    pub const LOWER_BOUND: u64 = 4;
    pub const BASELINE: u64 = 5;
    pub const WORLDS: u64 = 6;
    pub const SYNTH_GRAPH: u64 = 7;
    pub const SYNTH_LOG: u64 = 8;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for a child component, mixed from a parent seed and a tag.
pub fn derive_seed(master: u64, tag: u64) -> u64 {
    splitmix64(splitmix64(master) ^ tag.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// The `index`-th stream of `domain` under `master`.
pub fn stream(master: u64, domain: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(master, domain));
    rng.set_stream(index);
    rng
}

/// Uniform draw in [0, 1).
#[inline]
pub fn unit<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen::<f64>()
}
