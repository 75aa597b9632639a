//! Shared fixtures for the criterion benches.

use bloomrf::baselines::{ClassicBloom, PrefixBloom};
use bloomrf::workloads::{gen_empty_range_queries, gen_keys};
use bloomrf::{build_config, BloomRf, KeyDistribution, WorkloadSpec};

pub const N: u64 = 100_000;
pub const BITS_PER_KEY: f64 = 16.0;

pub fn spec(range_size: u64) -> WorkloadSpec {
    WorkloadSpec { queries: 10_000, range_size, ..WorkloadSpec::new(KeyDistribution::Uniform, 64, N) }
}

pub fn keys() -> Vec<u64> {
    gen_keys(&spec(1)).expect("valid workload")
}

pub fn empty_bloomrf() -> BloomRf {
    BloomRf::new(build_config(64, N, BITS_PER_KEY, None, None).expect("valid config")).expect("valid config")
}

pub fn loaded_bloomrf(keys: &[u64]) -> BloomRf {
    let f = empty_bloomrf();
    keys.iter().for_each(|&k| f.insert(k));
    f
}

pub fn loaded_bloom(keys: &[u64]) -> ClassicBloom {
    let f = ClassicBloom::with_bits_per_key(N, BITS_PER_KEY).expect("valid size");
    keys.iter().for_each(|&k| f.insert(k));
    f
}

pub fn loaded_prefix(keys: &[u64], range_size: u64) -> PrefixBloom {
    let m = (N as f64 * BITS_PER_KEY) as u64;
    let f = PrefixBloom::new(N, m, PrefixBloom::level_for_range(range_size), None).expect("valid size");
    keys.iter().for_each(|&k| f.insert(k));
    f
}

/// Ranges of `range_size` keys verified to hold no inserted key.
pub fn empty_ranges(keys: &[u64], range_size: u64) -> Vec<(u64, u64)> {
    gen_empty_range_queries(&spec(range_size), keys).expect("valid workload")
}
