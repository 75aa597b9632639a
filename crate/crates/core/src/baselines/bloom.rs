use std::sync::atomic::{AtomicU64, Ordering};

use crate::bitstore::SegmentedBitArray;
use crate::error::{Error, Result};
use crate::filter::round_bits;
use crate::hashing::{base_hash, derive_seeds};
use crate::wire::{Reader, Writer};

pub const BLOOM_MAGIC: &[u8; 4] = b"BBF1";
const BLOOM_SEED: u64 = 0x626c_6f6f_6d5f_7365;

/// k = ⌊ln 2 · m/n⌋, at least one.
pub fn optimal_hashes(n: u64, m: u64) -> u32 {
    ((std::f64::consts::LN_2 * m as f64 / n.max(1) as f64).floor() as u32).max(1)
}

#[derive(Debug)]
pub struct ClassicBloom {
    store: SegmentedBitArray,
    m: u64,
    seeds: Vec<u64>,
    expected_keys: u64,
    inserted: AtomicU64,
}

impl ClassicBloom {
    /// `m_bits` is rounded up to a multiple of 64.
    pub fn new(expected_keys: u64, m_bits: u64, k: Option<u32>) -> Result<Self> {
        if expected_keys == 0 {
            return Err(Error::config("expected key count must be positive"));
        }
        let m = round_bits(m_bits);
        let k = k.unwrap_or_else(|| optimal_hashes(expected_keys, m));
        if !(1..=64).contains(&k) {
            return Err(Error::config(format!("hash count {k} outside 1..=64")));
        }
        Ok(ClassicBloom {
            store: SegmentedBitArray::new(&[m])?,
            m,
            seeds: derive_seeds(BLOOM_SEED, k as usize),
            expected_keys,
            inserted: AtomicU64::new(0),
        })
    }

    pub fn with_bits_per_key(expected_keys: u64, bits_per_key: f64) -> Result<Self> {
        Self::new(expected_keys, (expected_keys as f64 * bits_per_key).ceil() as u64, None)
    }

    pub fn k(&self) -> u32 {
        self.seeds.len() as u32
    }

    pub fn bits(&self) -> u64 {
        self.m
    }

    pub fn expected_keys(&self) -> u64 {
        self.expected_keys
    }

    pub fn inserted_count(&self) -> u64 {
        self.inserted.load(Ordering::Acquire)
    }

    pub fn store(&self) -> &SegmentedBitArray {
        &self.store
    }

    #[inline]
    fn position(&self, i: usize, key: u64) -> u64 {
        base_hash(self.seeds[i], key) % self.m
    }

    pub fn insert(&self, key: u64) {
        for i in 0..self.seeds.len() {
            self.store.set_unchecked(0, self.position(i, key));
        }
        self.inserted.fetch_add(1, Ordering::AcqRel);
    }

    pub fn point_lookup(&self, key: u64) -> bool {
        (0..self.seeds.len()).all(|i| self.store.test_unchecked(0, self.position(i, key)))
    }

    pub(crate) fn write_fields(&self, w: &mut Writer) {
        w.u64(self.m);
        w.u64(self.expected_keys);
        w.u64(self.inserted_count());
        w.u16(self.seeds.len() as u16);
        for &s in &self.seeds {
            w.u64(s);
        }
    }

    pub(crate) fn write_payload(&self, w: &mut Writer) {
        for word in self.store.words(0).expect("single segment") {
            w.u64(word);
        }
    }

    pub(crate) fn read_fields(r: &mut Reader) -> Result<(u64, u64, u64, Vec<u64>)> {
        let m = r.u64()?;
        let expected = r.u64()?;
        let inserted = r.u64()?;
        let count = r.u16()?;
        let seeds = (0..count).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
        if m == 0 || m % 64 != 0 || seeds.is_empty() || seeds.len() > 64 || expected == 0 {
            return Err(Error::Malformed("invalid Bloom parameters".into()));
        }
        Ok((m, expected, inserted, seeds))
    }

    pub(crate) fn from_parts(m: u64, expected_keys: u64, inserted: u64, seeds: Vec<u64>, r: &mut Reader) -> Result<Self> {
        let words = r.words(m / 64)?;
        Ok(ClassicBloom {
            store: SegmentedBitArray::from_words(&[m], vec![words])?,
            m,
            seeds,
            expected_keys,
            inserted: AtomicU64::new(inserted),
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(BLOOM_MAGIC);
        self.write_fields(&mut w);
        w.end_header();
        self.write_payload(&mut w);
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::open(bytes, BLOOM_MAGIC)?;
        let (m, expected, inserted, seeds) = Self::read_fields(&mut r)?;
        r.check_header()?;
        let bloom = Self::from_parts(m, expected, inserted, seeds, &mut r)?;
        r.finish()?;
        Ok(bloom)
    }
}
