//! Filter files: build from a key stream, probe with a query stream.

use std::io::Write;

use anyhow::{bail, Result};
use bloomrf::workloads::{gen_keys, Query};
use bloomrf::model::config_from_kv;
use bloomrf::{build_config, BloomRf, FilterConfig, WorkloadSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct BuildOptions {
    pub d: u32,
    pub bits_per_key: f64,
    pub delta: Option<u32>,
    /// `key=value` layout as printed by `advise --kv`.
    pub layout: Option<String>,
    pub reverse_mitigation: bool,
    pub seed: Option<u64>,
}

pub fn build_filter(keys: &[u64], opts: &BuildOptions) -> Result<BloomRf> {
    if keys.is_empty() {
        bail!("no keys to insert");
    }
    let cfg: FilterConfig = match &opts.layout {
        Some(text) => config_from_kv(text)?,
        None => build_config(opts.d, keys.len() as u64, opts.bits_per_key, opts.delta, None)?,
    };
    let cfg = match opts.seed {
        Some(s) => cfg.with_seed(s),
        None => cfg,
    }
    .with_reverse_mitigation(opts.reverse_mitigation);
    let filter = BloomRf::new(cfg)?;
    for &k in keys {
        if !filter.in_domain(k) {
            bail!("key {k} outside the {}-bit domain", filter.config().domain_bits);
        }
        filter.insert(k);
    }
    Ok(filter)
}

/// Answers one query; malformed queries become errors instead of panics.
pub fn answer(filter: &BloomRf, q: Query) -> Result<bool> {
    Ok(match q {
        Query::Point(k) if filter.in_domain(k) => filter.point_lookup(k),
        Query::Point(k) => bail!("key {k} outside the {}-bit domain", filter.config().domain_bits),
        Query::Range(l, r) => filter.range_lookup(l, r)?,
    })
}

/// Writes one line per query ("true", "false" or "error: …") and returns the
/// number of error lines.
pub fn probe_all<W: Write>(filter: &BloomRf, queries: &[Query], mut out: W) -> Result<usize> {
    let mut errors = 0;
    for &q in queries {
        match answer(filter, q) {
            Ok(a) => writeln!(out, "{a}")?,
            Err(e) => {
                errors += 1;
                writeln!(out, "error: {e}")?;
            }
        }
    }
    Ok(errors)
}

/// Keys plus a mixed query stream: half point queries, half ranges of up to
/// `max_range` keys, starting near inserted keys or anywhere in the domain.
pub fn gen_artifacts(spec: &WorkloadSpec, queries: u64, max_range: u64) -> Result<(Vec<u64>, Vec<Query>)> {
    let keys = gen_keys(spec)?;
    let mask = if spec.domain_bits == 64 { u64::MAX } else { (1u64 << spec.domain_bits) - 1 };
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x7175_6572_7966);
    let qs = (0..queries)
        .map(|_| {
            let base = if rng.random_bool(0.5) && !keys.is_empty() {
                keys[rng.random_range(0..keys.len())]
            } else {
                rng.random::<u64>() & mask
            };
            if rng.random_bool(0.5) {
                Query::Point(base)
            } else {
                let w = rng.random_range(0..max_range.max(1));
                let l = base.saturating_sub(rng.random_range(0..=w));
                Query::Range(l, l.saturating_add(w).min(mask))
            }
        })
        .collect();
    Ok((keys, qs))
}
