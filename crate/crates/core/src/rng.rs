//! Seeding helpers. Every stochastic component draws from its own
//! `Xoshiro256PlusPlus` stream derived from explicit 64-bit seeds, so results
//! never depend on scheduling order.

use rand::SeedableRng;
pub use rand_xoshiro::Xoshiro256PlusPlus as SimRng;

/// Recorded in output metadata.
pub const RNG_ALGORITHM: &str = "xoshiro256++ (seed_from_u64), splitmix64 seed derivation";

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive hash of a seed path, e.g. `(master, network_seed, replicate)`.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0x6A09_E667_F3BC_C908, |acc, &p| {
        splitmix64(acc ^ splitmix64(p))
    })
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}
