//! Seeded random streams.
//!
//! Every stream is a SplitMix64 generator: a 64-bit state advanced by the
//! constant `0x9E3779B97F4A7C15` (wrapping), whose output is the state mixed
//! by
//!
//! ```text
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z =  z ^ (z >> 31)
//! ```
//!
//! The state is seeded directly with the 64-bit seed. Traffic class `k` of a
//! scenario with seed `s` draws from the stream seeded with `s ^ k`.

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::units::Bandwidth;

#[derive(Clone, Debug)]
pub struct Stream(SplitMix64);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream(SplitMix64::from_seed(seed.to_le_bytes()))
    }

    /// The sub-stream of one traffic class: seed `seed ^ class`.
    pub fn for_class(seed: u64, class: usize) -> Self {
        Stream::new(seed ^ class as u64)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `(0, 1]` with 53 bits of resolution.
    pub fn next_unit(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Inverse-CDF exponential: `-mean * ln(u)` for `u` in `(0, 1]`.
pub fn exponential_from_unit(u: f64, mean: f64) -> f64 {
    -mean * u.ln()
}

/// Exponential variate with the given mean (seconds); advances the stream.
pub fn sample_exponential(stream: &mut Stream, mean: f64) -> f64 {
    debug_assert!(mean > 0.0);
    exponential_from_unit(stream.next_unit(), mean)
}

/// Uniform over the 0.1 Mbps grid from `lo` to `hi` inclusive; advances the
/// stream by one draw.
pub fn sample_uniform(stream: &mut Stream, lo: Bandwidth, hi: Bandwidth) -> Bandwidth {
    debug_assert!(lo <= hi);
    let steps = (hi.tenths() - lo.tenths()) as u128 + 1;
    let offset = (stream.next_u64() as u128 * steps) >> 64;
    Bandwidth::from_tenths(lo.tenths() + offset as i64)
}
