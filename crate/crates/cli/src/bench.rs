//! Benchmark cells: build one filter, replay verified-empty queries, report
//! one [`ExperimentRecord`].

use std::time::Instant;

use anyhow::{bail, Context, Result};
use bloomrf::baselines::{ClassicBloom, FencePointers, PrefixBloom, MAX_PREFIX_PROBES};
use bloomrf::workloads::{gen_empty_range_queries, gen_keys};
use bloomrf::{
    advise, basic_range_fpr, build_config, build_config_with_layers, extended_profile, point_fpr, AccessStats,
    BloomRf, FilterConfig, KeyDistribution, WorkloadSpec,
};
use rayon::prelude::*;

use crate::record::{config_hash, ExperimentRecord};

pub const FENCE_BLOCK: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FilterKind {
    Bloomrf,
    Bloom,
    PrefixBloom,
    Fence,
}

impl FilterKind {
    pub fn name(self) -> &'static str {
        match self {
            FilterKind::Bloomrf => "bloomrf",
            FilterKind::Bloom => "bloom",
            FilterKind::PrefixBloom => "prefix-bloom",
            FilterKind::Fence => "fence",
        }
    }
}

/// bloomRF layout selection for a cell.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Layout {
    /// Δ = 7 with the layer-count formula.
    #[default]
    Basic,
    /// Uniform Δ; `k` overrides the layer-count formula.
    Uniform { delta: u32, k: Option<u32> },
    /// Advisor layout tuned for the cell's range size.
    Advised,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchCell {
    pub filter: FilterKind,
    pub distribution: KeyDistribution,
    pub d: u32,
    pub n: u64,
    pub queries: u64,
    pub range_size: u64,
    pub bits_per_key: f64,
    pub seed: u64,
    pub layout: Layout,
}

impl BenchCell {
    pub fn new(filter: FilterKind, n: u64, bits_per_key: f64, range_size: u64) -> Self {
        BenchCell {
            filter,
            distribution: KeyDistribution::Uniform,
            d: 64,
            n,
            queries: 100_000,
            range_size,
            bits_per_key,
            seed: 1,
            layout: Layout::Basic,
        }
    }

    pub fn workload(&self) -> WorkloadSpec {
        WorkloadSpec {
            distribution: self.distribution,
            domain_bits: self.d,
            n: self.n,
            queries: self.queries,
            range_size: self.range_size,
            empty_queries: true,
            seed: self.seed,
        }
    }

    pub fn bloomrf_config(&self) -> Result<FilterConfig> {
        Ok(match self.layout {
            Layout::Basic => build_config(self.d, self.n, self.bits_per_key, None, None)?,
            Layout::Uniform { delta, k: None } => build_config(self.d, self.n, self.bits_per_key, Some(delta), None)?,
            Layout::Uniform { delta, k: Some(k) } => build_config_with_layers(self.d, self.n, self.bits_per_key, delta, k)?,
            Layout::Advised => {
                let budget = (self.n as f64 * self.bits_per_key).ceil() as u64;
                let adv = advise(self.d, self.n, budget, self.range_size as f64, 1.0)?;
                build_config(self.d, self.n, self.bits_per_key, None, Some(&adv))?
            }
        })
    }
}

/// A built filter of any kind.
pub enum Built {
    Rf(BloomRf),
    Bloom(ClassicBloom),
    Prefix(PrefixBloom),
    Fence(FencePointers),
}

impl Built {
    pub fn build(cell: &BenchCell, keys: &[u64]) -> Result<Built> {
        let m = (cell.n as f64 * cell.bits_per_key).ceil() as u64;
        let built = match cell.filter {
            FilterKind::Bloomrf => Built::Rf(BloomRf::new(cell.bloomrf_config()?)?),
            FilterKind::Bloom => Built::Bloom(ClassicBloom::new(cell.n, m, None)?),
            FilterKind::PrefixBloom => {
                Built::Prefix(PrefixBloom::new(cell.n, m, PrefixBloom::level_for_range(cell.range_size), None)?)
            }
            FilterKind::Fence => return Ok(Built::Fence(FencePointers::build(keys, FENCE_BLOCK)?)),
        };
        for &k in keys {
            built.insert(k);
        }
        Ok(built)
    }

    fn insert(&self, key: u64) {
        match self {
            Built::Rf(f) => f.insert(key),
            Built::Bloom(f) => f.insert(key),
            Built::Prefix(f) => f.insert(key),
            Built::Fence(_) => unreachable!("fence pointers are built in bulk"),
        }
    }

    pub fn lookup(&self, l: u64, r: u64) -> Result<bool> {
        Ok(match self {
            Built::Rf(f) if l == r => f.point_lookup(l),
            Built::Rf(f) => f.range_lookup(l, r)?,
            Built::Bloom(_) if r - l >= MAX_PREFIX_PROBES => true,
            Built::Bloom(f) => (l..=r).any(|x| f.point_lookup(x)),
            Built::Prefix(f) => f.range_lookup(l, r)?,
            Built::Fence(f) => f.fence_range(l, r)?,
        })
    }

    pub fn size_bits(&self) -> u64 {
        match self {
            Built::Rf(f) => f.config().total_bits(),
            Built::Bloom(f) => f.bits(),
            Built::Prefix(f) => f.bloom().bits(),
            Built::Fence(f) => f.size_bits(),
        }
    }

    /// Full parameter description, the input of the config hash.
    pub fn describe(&self) -> String {
        match self {
            Built::Rf(f) => format!("bloomrf {:?}", f.config()),
            Built::Bloom(f) => format!("bloom m={} k={}", f.bits(), f.k()),
            Built::Prefix(f) => format!("prefix-bloom m={} k={} level={}", f.bloom().bits(), f.bloom().k(), f.prefix_level()),
            Built::Fence(f) => format!("fence block={} blocks={}", f.block_size(), f.blocks().len()),
        }
    }

    /// Analytic FPR for ranges of `range_size` keys, where one exists.
    pub fn model_fpr(&self, n: u64, range_size: u64) -> Option<f64> {
        let r = range_size as f64;
        let nf = n as f64;
        match self {
            Built::Rf(f) => {
                let c = f.config();
                let uniform = c.exact_level.is_none()
                    && c.deltas.windows(2).all(|w| w[0] == w[1])
                    && c.replicas.iter().all(|&x| x == 1)
                    && c.segment_bits.len() == 1;
                if range_size == 1 {
                    return Some(extended_profile(c, n, 1.0).point());
                }
                if uniform {
                    basic_range_fpr(nf, c.total_bits() as f64, c.k() as u32, c.deltas[0], r)
                        .ok()
                        .map(|e| e.min(1.0))
                } else {
                    Some((2.0 * extended_profile(c, n, 1.0).max_up_to(r)).min(1.0))
                }
            }
            Built::Bloom(f) => {
                let p = point_fpr(nf, f.bits() as f64, f64::from(f.k()));
                Some(if range_size > MAX_PREFIX_PROBES { 1.0 } else { 1.0 - (1.0 - p).powf(r) })
            }
            Built::Prefix(f) => {
                let p = point_fpr(nf, f.bloom().bits() as f64, f64::from(f.bloom().k()));
                let probes = (r / 2f64.powi(f.prefix_level() as i32)).ceil() + 1.0;
                Some(1.0 - (1.0 - p).powf(probes))
            }
            Built::Fence(_) => None,
        }
    }
}

pub fn run_cell(cell: &BenchCell) -> Result<ExperimentRecord> {
    let spec = cell.workload();
    let keys = gen_keys(&spec)?;
    let start = Instant::now();
    let built = Built::build(cell, &keys)?;
    let build_seconds = start.elapsed().as_secs_f64();
    let queries = gen_empty_range_queries(&spec, &keys)
        .with_context(|| format!("generating empty queries of size {}", cell.range_size))?;
    if queries.is_empty() {
        bail!("no queries to run");
    }

    let start = Instant::now();
    let mut false_positives = 0u64;
    for &(l, r) in &queries {
        false_positives += u64::from(built.lookup(l, r)?);
    }
    let elapsed = start.elapsed().as_secs_f64().max(1e-9);

    let (mean_word_accesses, max_accesses) = match &built {
        Built::Rf(f) => {
            let (mut words, mut max) = (0u64, 0u64);
            for &(l, r) in &queries {
                let mut stats = AccessStats::default();
                f.range_lookup_traced(l, r, &mut stats)?;
                words += stats.word_reads;
                max = max.max(stats.total());
            }
            (Some(words as f64 / queries.len() as f64), Some(max))
        }
        _ => (None, None),
    };

    let negatives = queries.len() as u64;
    Ok(ExperimentRecord {
        config_hash: config_hash(&format!("{} {:?}", built.describe(), spec)),
        seed: cell.seed,
        filter: cell.filter.name().into(),
        n: cell.n,
        bits_per_key: built.size_bits() as f64 / cell.n as f64,
        d: cell.d,
        distribution: cell.distribution.name().into(),
        range_size: cell.range_size,
        queries: cell.queries,
        negatives,
        false_positives,
        measured_fpr: false_positives as f64 / negatives as f64,
        model_fpr: built.model_fpr(cell.n, cell.range_size),
        probes_per_sec: negatives as f64 / elapsed,
        mean_word_accesses,
        max_accesses,
        build_seconds,
    })
}

/// Worker count: `requested` (default: available cores), capped by `BRF_THREADS`.
pub fn thread_budget(requested: Option<usize>) -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cap = std::env::var("BRF_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&t| t > 0);
    let want = requested.unwrap_or(available).max(1);
    cap.map_or(want, |c| want.min(c))
}

/// Runs cells in parallel; results keep the input order.
pub fn run_cells(cells: &[BenchCell], threads: usize) -> Result<Vec<Result<ExperimentRecord>>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build()?;
    Ok(pool.install(|| cells.par_iter().map(run_cell).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cells_run() {
        for filter in [FilterKind::Bloomrf, FilterKind::Bloom, FilterKind::PrefixBloom, FilterKind::Fence] {
            let mut cell = BenchCell::new(filter, 2000, 16.0, 64);
            cell.queries = 500;
            let rec = run_cell(&cell).unwrap();
            assert_eq!(rec.negatives, 500);
            assert!((0.0..=1.0).contains(&rec.measured_fpr));
            assert_eq!(rec.mean_word_accesses.is_some(), filter == FilterKind::Bloomrf);
            assert_eq!(rec.model_fpr.is_some(), filter != FilterKind::Fence);
        }
    }

    #[test]
    fn reproducible_hash() {
        let mut cell = BenchCell::new(FilterKind::Bloomrf, 1000, 12.0, 1);
        cell.queries = 100;
        let a = run_cell(&cell).unwrap();
        let b = run_cell(&cell).unwrap();
        assert_eq!(a.config_hash, b.config_hash);
        assert_eq!(a.false_positives, b.false_positives);
        cell.seed = 2;
        assert_ne!(run_cell(&cell).unwrap().config_hash, a.config_hash);
    }

    #[test]
    fn advised_layout_runs() {
        let mut cell = BenchCell::new(FilterKind::Bloomrf, 5000, 16.0, 1 << 10);
        cell.layout = Layout::Advised;
        cell.queries = 200;
        let rec = run_cell(&cell).unwrap();
        assert!(rec.model_fpr.unwrap() <= 1.0);
    }

    #[test]
    fn parallel_order_is_stable() {
        let cells: Vec<BenchCell> = [1u64, 16, 256]
            .iter()
            .map(|&r| BenchCell { queries: 200, ..BenchCell::new(FilterKind::Bloomrf, 1000, 14.0, r) })
            .collect();
        let out = run_cells(&cells, 2).unwrap();
        let sizes: Vec<u64> = out.into_iter().map(|r| r.unwrap().range_size).collect();
        assert_eq!(sizes, vec![1, 16, 256]);
    }
}
