//! Deterministic, counter-based randomness for sampling decisions.
//!
//! Every random decision is a pure function of the seed and the identity of
//! the thing being decided (edge ingestion index, wedge pair, stream step).
//! Decisions therefore do not depend on iteration order or thread schedule,
//! and a fixed seed reproduces the exact same sample on any platform.
//! Mixing uses the splitmix64 finalizer.

/// Domain tags keeping decision streams disjoint.
pub const DOMAIN_EDGE: u64 = 0x01;
pub const DOMAIN_WEDGE: u64 = 0x02;
pub const DOMAIN_RESERVOIR_COIN: u64 = 0x03;
pub const DOMAIN_RESERVOIR_VICTIM: u64 = 0x04;

/// splitmix64 output function (Steele, Lea, Flood).
#[inline]
pub fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes `(seed, parts...)` into a single well-mixed 64-bit value.
#[inline]
pub fn mix(seed: u64, parts: &[u64]) -> u64 {
    let mut h = splitmix64(seed);
    for &p in parts {
        h = splitmix64(h ^ p);
    }
    h
}

/// Maps a 64-bit hash onto `[0, 1)` with 53 bits of precision.
#[inline]
pub fn unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Bernoulli decision with success probability `p`, keyed by `(seed, parts)`.
#[inline]
pub fn accept(seed: u64, parts: &[u64], p: f64) -> bool {
    unit(mix(seed, parts)) < p
}

/// Unbiased-to-within-`n/2^64` index in `0..n`, keyed by `(seed, parts)`.
#[inline]
pub fn pick_index(seed: u64, parts: &[u64], n: u64) -> u64 {
    debug_assert!(n > 0);
    ((mix(seed, parts) as u128 * n as u128) >> 64) as u64
}
