use crate::error::{Error, Result};
use crate::hashing::{derive_seeds, LayerHashSpec};
use crate::model::AdvisorResult;

pub const DEFAULT_SEED: u64 = 0x6272_665f_7365_6564;
pub const DEFAULT_DELTA: u32 = 7;
pub const MAX_REPLICAS: u32 = 8;
const MAX_EXACT_BITS: u32 = 40;

/// Complete filter parameterization.
///
/// Layer vectors are stored bottom-first: index 0 is the layer on level 0.
/// `segment_assignment` uses 1-based segment numbers; segment 1 holds the
/// exact bitmap when `exact_level` is set.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterConfig {
    pub domain_bits: u32,
    pub expected_keys: u64,
    pub deltas: Vec<u32>,
    pub replicas: Vec<u32>,
    pub segment_assignment: Vec<u32>,
    pub segment_bits: Vec<u64>,
    pub exact_level: Option<u32>,
    /// One seed per (layer, replica) in layer order, then the orientation seed.
    pub seeds: Vec<u64>,
    pub reverse_mitigation: bool,
}

impl FilterConfig {
    /// Builds and validates a config, deriving seeds from `DEFAULT_SEED`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        domain_bits: u32,
        expected_keys: u64,
        deltas: Vec<u32>,
        replicas: Vec<u32>,
        segment_assignment: Vec<u32>,
        segment_bits: Vec<u64>,
        exact_level: Option<u32>,
    ) -> Result<Self> {
        let seed_count = replicas.iter().map(|&r| r as usize).sum::<usize>() + 1;
        let cfg = FilterConfig {
            domain_bits,
            expected_keys,
            deltas,
            replicas,
            segment_assignment,
            segment_bits,
            exact_level,
            seeds: derive_seeds(DEFAULT_SEED, seed_count),
            reverse_mitigation: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Uniform Δ, one replica per layer, a single segment, no exact level.
    pub fn uniform(domain_bits: u32, expected_keys: u64, total_bits: u64, delta: u32, k: u32) -> Result<Self> {
        Self::new(
            domain_bits,
            expected_keys,
            vec![delta; k as usize],
            vec![1; k as usize],
            vec![1; k as usize],
            vec![total_bits],
            None,
        )
    }

    pub fn with_seed(mut self, master: u64) -> Self {
        self.seeds = derive_seeds(master, self.seeds.len());
        self
    }

    pub fn with_reverse_mitigation(mut self, on: bool) -> Self {
        self.reverse_mitigation = on;
        self
    }

    pub fn k(&self) -> usize {
        self.deltas.len()
    }

    /// ℓ_i for every layer, bottom-first.
    pub fn levels(&self) -> Vec<u32> {
        self.deltas
            .iter()
            .scan(0u32, |acc, &d| {
                let l = *acc;
                *acc += d;
                Some(l)
            })
            .collect()
    }

    /// First level not represented by a hashed layer (ΣΔ).
    pub fn top_level(&self) -> u32 {
        self.deltas.iter().sum()
    }

    pub fn total_bits(&self) -> u64 {
        self.segment_bits.iter().sum()
    }

    pub fn bits_per_key(&self) -> f64 {
        self.total_bits() as f64 / self.expected_keys.max(1) as f64
    }

    pub fn orientation_seed(&self) -> u64 {
        *self.seeds.last().expect("validated config has seeds")
    }

    pub fn layer_specs(&self) -> Vec<LayerHashSpec> {
        let mut next_seed = 0;
        self.levels()
            .into_iter()
            .enumerate()
            .map(|(i, level)| {
                let r = self.replicas[i] as usize;
                let seeds = self.seeds[next_seed..next_seed + r].to_vec();
                next_seed += r;
                LayerHashSpec {
                    layer_index: i,
                    level,
                    delta: self.deltas[i],
                    segment: self.segment_assignment[i] as usize - 1,
                    seeds,
                }
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.domain_bits;
        if !(1..=64).contains(&d) {
            return Err(Error::config(format!("domain bits {d} outside 1..=64")));
        }
        if self.expected_keys == 0 {
            return Err(Error::config("expected key count must be positive"));
        }
        let k = self.deltas.len();
        if k == 0 || k > 64 {
            return Err(Error::config(format!("layer count {k} outside 1..=64")));
        }
        if self.replicas.len() != k || self.segment_assignment.len() != k {
            return Err(Error::config("Δ, replica and segment vectors differ in length"));
        }
        if let Some(&bad) = self.deltas.iter().find(|&&dl| !(1..=7).contains(&dl)) {
            return Err(Error::config(format!("Δ={bad} outside 1..=7")));
        }
        if let Some(&bad) = self.replicas.iter().find(|&&r| !(1..=MAX_REPLICAS).contains(&r)) {
            return Err(Error::config(format!("replica count {bad} outside 1..={MAX_REPLICAS}")));
        }
        let levels = self.levels();
        if levels[k - 1] >= d {
            return Err(Error::config(format!(
                "top layer level {} is not below the domain width {d}",
                levels[k - 1]
            )));
        }
        let s = self.segment_bits.len();
        if s == 0 || s > 255 {
            return Err(Error::config(format!("segment count {s} outside 1..=255")));
        }
        if self.segment_bits.contains(&0) {
            return Err(Error::config("segments must be non-empty"));
        }
        for (i, &j) in self.segment_assignment.iter().enumerate() {
            if j == 0 || j as usize > s {
                return Err(Error::config(format!("layer {i} assigned to missing segment {j}")));
            }
            let width = 1u64 << (self.deltas[i] - 1);
            if self.segment_bits[j as usize - 1] % width != 0 {
                return Err(Error::config(format!(
                    "segment {j} size is not a multiple of layer {i}'s word width {width}"
                )));
            }
        }
        if let Some(le) = self.exact_level {
            if le != self.top_level() {
                return Err(Error::config(format!(
                    "exact level {le} differs from ΣΔ = {}",
                    self.top_level()
                )));
            }
            if le > d || d - le > MAX_EXACT_BITS {
                return Err(Error::config(format!("exact level {le} invalid for d={d}")));
            }
            if self.segment_bits[0] != 1u64 << (d - le) {
                return Err(Error::config(format!(
                    "exact segment must hold 2^{} bits",
                    d - le
                )));
            }
            if self.segment_assignment.contains(&1) {
                return Err(Error::config("segment 1 is reserved for the exact bitmap"));
            }
        }
        let expected_seeds = self.replicas.iter().map(|&r| r as usize).sum::<usize>() + 1;
        if self.seeds.len() != expected_seeds {
            return Err(Error::config(format!(
                "expected {expected_seeds} seeds, found {}",
                self.seeds.len()
            )));
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("seeds must be pairwise distinct"));
        }
        Ok(())
    }
}

/// k = ⌈(d − log2 n)/Δ⌉, at least one layer and never past the domain.
pub fn layer_count(d: u32, n: u64, delta: u32) -> u32 {
    let raw = ((f64::from(d) - (n.max(1) as f64).log2()) / f64::from(delta)).ceil();
    let cap = d.div_ceil(delta);
    (raw.max(1.0) as u32).min(cap)
}

/// Rounds a bit budget up to a multiple of 64 (which every word width divides).
pub fn round_bits(bits: u64) -> u64 {
    bits.div_ceil(64).max(1) * 64
}

fn check_build_args(d: u32, n: u64, bits_per_key: f64) -> Result<()> {
    if ![8, 16, 32, 64].contains(&d) {
        return Err(Error::config(format!("domain bits {d} not in {{8,16,32,64}}")));
    }
    if n == 0 {
        return Err(Error::config("n must be at least 1"));
    }
    if !(bits_per_key >= 6.0) || !bits_per_key.is_finite() {
        return Err(Error::config(format!("bits per key {bits_per_key} below 6")));
    }
    Ok(())
}

/// Basic layout: uniform Δ (default 7), one replica, one segment. With an
/// advisor result the advisor's layout is used instead.
pub fn build_config(
    d: u32,
    n: u64,
    bits_per_key: f64,
    delta: Option<u32>,
    advisor: Option<&AdvisorResult>,
) -> Result<FilterConfig> {
    check_build_args(d, n, bits_per_key)?;
    if let Some(adv) = advisor {
        let cfg = adv.config.clone();
        if cfg.domain_bits != d {
            return Err(Error::config("advisor result was computed for another domain"));
        }
        cfg.validate()?;
        return Ok(cfg);
    }
    let delta = delta.unwrap_or(DEFAULT_DELTA);
    build_config_with_layers(d, n, bits_per_key, delta, layer_count(d, n, delta))
}

/// As [`build_config`] in basic mode, with an explicit layer count.
pub fn build_config_with_layers(d: u32, n: u64, bits_per_key: f64, delta: u32, k: u32) -> Result<FilterConfig> {
    check_build_args(d, n, bits_per_key)?;
    if !(1..=7).contains(&delta) {
        return Err(Error::config(format!("Δ={delta} outside 1..=7")));
    }
    let budget = (n as f64 * bits_per_key).ceil() as u64;
    let m = round_bits(budget);
    if (m - budget) as f64 > 0.1 * budget as f64 {
        return Err(Error::config(format!(
            "rounding {budget} bits to {m} exceeds the budget by more than 10%"
        )));
    }
    FilterConfig::uniform(d, n, m, delta, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layer_counts() {
        assert_eq!(layer_count(16, 3, 4), 4);
        assert_eq!(layer_count(64, 1 << 22, 7), 6);
        // ⌈(64 − 20.93)/7⌉ = ⌈6.15⌉
        assert_eq!(layer_count(64, 2_000_000, 7), 7);
        assert_eq!(layer_count(8, 1, 7), 2);
        assert_eq!(layer_count(64, u64::MAX, 7), 1);
    }

    #[test]
    fn toy_levels() {
        let cfg = FilterConfig::uniform(16, 3, 32, 4, layer_count(16, 3, 4)).unwrap();
        assert_eq!(cfg.levels(), vec![0, 4, 8, 12]);
        assert_eq!(cfg.top_level(), 16);
        assert_eq!(cfg.seeds.len(), 5);
    }

    #[test]
    fn build_basic() {
        let cfg = build_config(64, 100_000, 10.0, None, None).unwrap();
        assert_eq!(cfg.total_bits(), 1_000_000);
        assert_eq!(cfg.k(), layer_count(64, 100_000, 7) as usize);
        assert!(build_config(12, 10, 10.0, None, None).is_err());
        assert!(build_config(64, 10, 5.0, None, None).is_err());
        assert!(build_config(64, 0, 10.0, None, None).is_err());
        // 30 bits round to 64
        assert!(build_config(16, 3, 10.0, Some(4), None).is_err());
    }

    #[test]
    fn rejects_bad_layouts() {
        assert!(FilterConfig::uniform(16, 3, 36, 4, 4).is_err());
        assert!(FilterConfig::uniform(16, 3, 64, 8, 2).is_err());
        assert!(FilterConfig::uniform(16, 3, 64, 4, 5).is_err());
        let ok = FilterConfig::new(16, 3, vec![4, 4], vec![1, 1], vec![2, 2], vec![256, 64], Some(8));
        assert!(ok.is_ok());
        let wrong_exact = FilterConfig::new(16, 3, vec![4, 4], vec![1, 1], vec![2, 2], vec![128, 64], Some(8));
        assert!(wrong_exact.is_err());
        let reserved = FilterConfig::new(16, 3, vec![4, 4], vec![1, 1], vec![1, 2], vec![256, 64], Some(8));
        assert!(reserved.is_err());
        let mut dup = ok.unwrap();
        dup.seeds[1] = dup.seeds[0];
        assert!(dup.validate().is_err());
    }
}
