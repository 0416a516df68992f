//! Seeded random streams.
//!
//! Every random draw in the crate comes from a [`SeededRng`], which is
//! ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through `SeedableRng::seed_from_u64`.
//! Both are specified bit-for-bit by their crates, so a seed reproduces the
//! same stream on every platform.
//!
//! Independent substreams (one per dataset instance, one per corpus formula)
//! are obtained with [`derive_seed`]: the substream seed for `index` under
//! `base` is `splitmix64(base ^ splitmix64(index + 1))`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One round of the SplitMix64 output function.
pub const fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub const fn derive_seed(base: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(index.wrapping_add(1)))
}
