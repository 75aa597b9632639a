//! Deterministic key and query generators.
//!
//! All randomness comes from ChaCha8 seeded by the spec's seed, so a spec
//! regenerates identical streams on every platform.

mod io;

pub use io::{read_queries, read_u64s, write_queries, write_u64s, Query};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal, Zipf};

use crate::error::{Error, Result};
use crate::filter::layer_count;

const MAX_RETRIES: u32 = 10_000;
const SPREAD: u64 = 0x9e37_79b9_7f4a_7c15;
const QUERY_STREAM: u64 = 0x7175_6572_79;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KeyDistribution {
    Uniform,
    /// Mean and standard deviation as fractions of the domain size.
    Normal { mean: f64, stddev: f64 },
    /// Rank-frequency law with exponent `skew` over `universe` ranks.
    Zipfian { skew: f64, universe: u64 },
}

impl KeyDistribution {
    pub fn normal_default() -> Self {
        KeyDistribution::Normal { mean: 0.5, stddev: 1.0 / 16.0 }
    }

    pub fn zipfian_default(n: u64) -> Self {
        KeyDistribution::Zipfian { skew: 1.0, universe: n.max(1).saturating_mul(16) }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KeyDistribution::Uniform => "uniform",
            KeyDistribution::Normal { .. } => "normal",
            KeyDistribution::Zipfian { .. } => "zipfian",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorkloadSpec {
    pub distribution: KeyDistribution,
    pub domain_bits: u32,
    pub n: u64,
    pub queries: u64,
    pub range_size: u64,
    pub empty_queries: bool,
    pub seed: u64,
}

impl WorkloadSpec {
    pub fn new(distribution: KeyDistribution, domain_bits: u32, n: u64) -> Self {
        WorkloadSpec {
            distribution,
            domain_bits,
            n,
            queries: 100_000,
            range_size: 1,
            empty_queries: true,
            seed: 0,
        }
    }

    fn domain_max(&self) -> u64 {
        if self.domain_bits == 64 {
            u64::MAX
        } else {
            (1u64 << self.domain_bits) - 1
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=64).contains(&self.domain_bits) {
            return Err(Error::arg(format!("domain bits {} outside 1..=64", self.domain_bits)));
        }
        if self.range_size == 0 || self.range_size - 1 > self.domain_max() {
            return Err(Error::arg(format!("range size {} does not fit the domain", self.range_size)));
        }
        match self.distribution {
            KeyDistribution::Uniform => {}
            KeyDistribution::Normal { mean, stddev } => {
                if !(0.0..=1.0).contains(&mean) || !(stddev >= 0.0) {
                    return Err(Error::arg("normal mean must be in [0,1] and stddev ≥ 0"));
                }
            }
            KeyDistribution::Zipfian { skew, universe } => {
                if !(skew > 0.0) || universe == 0 {
                    return Err(Error::arg("zipfian skew must be positive and universe non-empty"));
                }
            }
        }
        Ok(())
    }
}

/// Stateful key stream for one distribution.
pub struct KeyGenerator {
    rng: ChaCha8Rng,
    distribution: KeyDistribution,
    domain_bits: u32,
    zipf: Option<Zipf<f64>>,
}

impl KeyGenerator {
    pub fn new(distribution: KeyDistribution, domain_bits: u32, seed: u64) -> Result<Self> {
        let zipf = match distribution {
            KeyDistribution::Zipfian { skew, universe } => Some(
                Zipf::new(universe as f64, skew).map_err(|e| Error::arg(format!("zipf parameters: {e}")))?,
            ),
            _ => None,
        };
        Ok(KeyGenerator { rng: ChaCha8Rng::seed_from_u64(seed), distribution, domain_bits, zipf })
    }

    fn mask(&self) -> u64 {
        if self.domain_bits == 64 {
            u64::MAX
        } else {
            (1u64 << self.domain_bits) - 1
        }
    }

    pub fn next_key(&mut self) -> u64 {
        let mask = self.mask();
        match self.distribution {
            KeyDistribution::Uniform => self.rng.random::<u64>() & mask,
            KeyDistribution::Normal { mean, stddev } => {
                let size = 2f64.powi(self.domain_bits as i32);
                let z: f64 = self.rng.sample(StandardNormal);
                let x = (mean * size + z * stddev * size).floor();
                let mut key = if x <= 0.0 {
                    0
                } else if x >= mask as f64 {
                    mask
                } else {
                    x as u64
                };
                // f64 cannot resolve the low bits of wide domains; fill them
                // uniformly so the low-order structure is not degenerate.
                let unresolved = self.domain_bits.saturating_sub(52);
                if unresolved > 0 && stddev * size >= 2f64.powi(unresolved as i32) {
                    let low = (1u64 << unresolved) - 1;
                    key = (key & !low) | (self.rng.random::<u64>() & low);
                }
                key
            }
            KeyDistribution::Zipfian { .. } => {
                let rank = self.zipf.as_ref().expect("zipf sampler").sample(&mut self.rng) as u64 - 1;
                rank.wrapping_mul(SPREAD) & mask
            }
        }
    }

    /// Uniform draw in `[0, bound]`.
    fn uniform_upto(&mut self, bound: u64) -> u64 {
        if bound == u64::MAX {
            self.rng.random()
        } else {
            self.rng.random_range(0..=bound)
        }
    }
}

impl Iterator for KeyGenerator {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        Some(self.next_key())
    }
}

pub fn gen_keys(spec: &WorkloadSpec) -> Result<Vec<u64>> {
    spec.validate()?;
    Ok(KeyGenerator::new(spec.distribution, spec.domain_bits, spec.seed)?
        .take(spec.n as usize)
        .collect())
}

/// Queries `[s, s + |I| − 1]` with starts drawn from the spec's distribution.
/// With `empty_queries` set, each query is verified empty against `keys`.
pub fn gen_empty_range_queries(spec: &WorkloadSpec, keys: &[u64]) -> Result<Vec<(u64, u64)>> {
    spec.validate()?;
    let mut sorted = keys.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let span = spec.range_size - 1;
    let last_start = spec.domain_max() - span;
    let mut gen = KeyGenerator::new(spec.distribution, spec.domain_bits, spec.seed ^ QUERY_STREAM)?;
    let mut out = Vec::with_capacity(spec.queries as usize);
    for _ in 0..spec.queries {
        let mut tries = 0;
        loop {
            let start = match spec.distribution {
                KeyDistribution::Uniform => gen.uniform_upto(last_start),
                _ => gen.next_key().min(last_start),
            };
            let end = start + span;
            let i = sorted.partition_point(|&k| k < start);
            if !spec.empty_queries || sorted.get(i).is_none_or(|&k| k > end) {
                out.push((start, end));
                break;
            }
            tries += 1;
            if tries >= MAX_RETRIES {
                return Err(Error::Generation(format!(
                    "no empty range of size {} found after {MAX_RETRIES} attempts",
                    spec.range_size
                )));
            }
        }
    }
    Ok(out)
}

/// Keys drawn with weight c_x = 1 + |{i : ((x >> iΔ) & w) = λ}|, w = 2^{Δ−1} − 1,
/// over the k groups a bloomRF with these parameters would hash.
pub fn gen_degenerate_keys(n: u64, domain_bits: u32, delta: u32, lambda: u64, seed: u64) -> Result<Vec<u64>> {
    if !(1..=7).contains(&delta) || lambda >= 1u64 << (delta - 1) {
        return Err(Error::arg(format!("λ={lambda} needs λ < 2^(Δ−1) with Δ={delta}")));
    }
    if !(1..=64).contains(&domain_bits) {
        return Err(Error::arg(format!("domain bits {domain_bits} outside 1..=64")));
    }
    let k = layer_count(domain_bits, n, delta);
    let w = (1u64 << (delta - 1)) - 1;
    let mut gen = KeyGenerator::new(KeyDistribution::Uniform, domain_bits, seed)?;
    let mut out = Vec::with_capacity(n as usize);
    while (out.len() as u64) < n {
        let x = gen.next_key();
        let c = 1 + (0..k).filter(|&i| (crate::hashing::shr(x, i * delta) & w) == lambda).count() as u32;
        if gen.rng.random_range(0..=k) < c {
            out.push(x);
        }
    }
    Ok(out)
}

/// Random key whose every Δ-group carries λ in its low Δ−1 bits.
pub fn aligned_key(rng: &mut impl Rng, domain_bits: u32, delta: u32, lambda: u64) -> u64 {
    let w = (1u64 << (delta - 1)) - 1;
    let mut x: u64 = rng.random();
    let mut shift = 0;
    while shift < domain_bits {
        x = (x & !(w << shift)) | (lambda << shift);
        shift += delta;
    }
    if domain_bits < 64 {
        x &= (1u64 << domain_bits) - 1;
    }
    x
}
