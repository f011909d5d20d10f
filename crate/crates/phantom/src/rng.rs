//! Seed derivation so every generated object has its own named stream.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a base seed, a stream tag and an index.
///
/// Distinct tags or indices give uncorrelated streams; the derivation is a
/// pure function, so datasets regenerate identically.
pub fn derive_seed(base: u64, tag: &str, index: u64) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in tag.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x100000001b3);
    }
    splitmix64(base ^ splitmix64(h) ^ index.wrapping_mul(0xD1B54A32D192ED03))
}

/// Deterministic generator for a derived seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distinct_tags_and_indices_decorrelate() {
        let a = derive_seed(42, "noise", 0);
        let b = derive_seed(42, "noise", 1);
        let c = derive_seed(42, "drift", 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(42, "noise", 0));
    }
}
