//! The bloomRF filter.

mod config;
mod decompose;
mod format;
mod range;

use std::sync::atomic::{AtomicU64, Ordering};

pub use config::{
    build_config, build_config_with_layers, layer_count, round_bits, FilterConfig, DEFAULT_DELTA, DEFAULT_SEED,
    MAX_REPLICAS,
};
pub use decompose::{decompose, DyadicDecomposition, DyadicInterval};
pub use format::MAGIC;
pub use range::{bit_mask, AccessStats, CheckItem};

use crate::bitstore::SegmentedBitArray;
use crate::error::{Error, Result};
use crate::hashing::{is_reversed, pmhf_position, reverse_pmhf_position, shr, LayerHashSpec};

#[derive(Debug)]
pub struct BloomRf {
    config: FilterConfig,
    layers: Vec<LayerHashSpec>,
    seg_bits: Vec<u64>,
    store: SegmentedBitArray,
    inserted: AtomicU64,
    top_level: u32,
    orientation: Option<(u64, u32)>,
}

impl BloomRf {
    pub fn new(config: FilterConfig) -> Result<Self> {
        config.validate()?;
        let store = SegmentedBitArray::new(&config.segment_bits)?;
        Ok(Self::assemble(config, store, 0))
    }

    fn assemble(config: FilterConfig, store: SegmentedBitArray, inserted: u64) -> Self {
        let layers = config.layer_specs();
        let top = layers.last().expect("validated config has layers");
        let orientation = config
            .reverse_mitigation
            .then(|| (config.orientation_seed(), top.word_shift()));
        BloomRf {
            seg_bits: config.segment_bits.clone(),
            top_level: config.top_level(),
            layers,
            store,
            inserted: AtomicU64::new(inserted),
            orientation,
            config,
        }
    }

    pub fn config(&self) -> &FilterConfig {
        &self.config
    }

    pub fn store(&self) -> &SegmentedBitArray {
        &self.store
    }

    pub fn layers(&self) -> &[LayerHashSpec] {
        &self.layers
    }

    pub fn inserted_count(&self) -> u64 {
        self.inserted.load(Ordering::Acquire)
    }

    pub fn in_domain(&self, key: u64) -> bool {
        self.config.domain_bits == 64 || key >> self.config.domain_bits == 0
    }

    /// Whether `key` uses the mirrored PMHF orientation.
    #[inline]
    pub fn reversed(&self, key: u64) -> bool {
        match self.orientation {
            Some((seed, shift)) => is_reversed(seed, key, shift),
            None => false,
        }
    }

    /// `(segment, bit)` written for `key` by `layer` under `replica`.
    #[inline]
    pub fn code_position(&self, layer: usize, replica: usize, key: u64) -> (usize, u64) {
        let spec = &self.layers[layer];
        let m = self.seg_bits[spec.segment];
        let pos = if self.reversed(key) {
            reverse_pmhf_position(spec, replica, key, m)
        } else {
            pmhf_position(spec, replica, key, m)
        };
        (spec.segment, pos)
    }

    /// Exact-bitmap bit for `key`, if an exact level is configured.
    #[inline]
    pub fn exact_position(&self, key: u64) -> Option<u64> {
        self.config.exact_level.map(|le| shr(key, le))
    }

    /// Sets every code bit of `key`.
    ///
    /// # Panics
    /// If `key` lies outside the configured domain.
    pub fn insert(&self, key: u64) {
        assert!(self.in_domain(key), "key {key} outside the {}-bit domain", self.config.domain_bits);
        for (i, spec) in self.layers.iter().enumerate() {
            for r in 0..spec.seeds.len() {
                let (seg, pos) = self.code_position(i, r, key);
                self.store.set_unchecked(seg, pos);
            }
        }
        if let Some(pos) = self.exact_position(key) {
            self.store.set_unchecked(0, pos);
        }
        self.inserted.fetch_add(1, Ordering::AcqRel);
    }

    /// True if every code bit of `key` is set.
    ///
    /// # Panics
    /// If `key` lies outside the configured domain.
    pub fn point_lookup(&self, key: u64) -> bool {
        assert!(self.in_domain(key), "key {key} outside the {}-bit domain", self.config.domain_bits);
        if let Some(pos) = self.exact_position(key) {
            if !self.store.test_unchecked(0, pos) {
                return false;
            }
        }
        for (i, spec) in self.layers.iter().enumerate().rev() {
            for r in 0..spec.seeds.len() {
                let (seg, pos) = self.code_position(i, r, key);
                if !self.store.test_unchecked(seg, pos) {
                    return false;
                }
            }
        }
        true
    }

    fn check_interval(&self, l: u64, r: u64) -> Result<()> {
        if l > r {
            return Err(Error::arg(format!("inverted interval [{l}, {r}]")));
        }
        if !self.in_domain(r) {
            return Err(Error::arg(format!("{r} outside the {}-bit domain", self.config.domain_bits)));
        }
        Ok(())
    }

    /// Approximate membership of any key in `[l, r]`. Never false when an
    /// inserted key lies in the interval.
    pub fn range_lookup(&self, l: u64, r: u64) -> Result<bool> {
        self.check_interval(l, r)?;
        Ok(self.range_impl(l, r, &mut ()))
    }

    /// [`range_lookup`](Self::range_lookup) that also counts word and bit reads.
    pub fn range_lookup_traced(&self, l: u64, r: u64, stats: &mut AccessStats) -> Result<bool> {
        self.check_interval(l, r)?;
        Ok(self.range_impl(l, r, stats))
    }
}
