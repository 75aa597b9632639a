//! Zero-run diagnostics of a bit array: lengths of maximal 0-bit runs and the
//! distances (1-bit runs) between consecutive zero runs.

use std::fmt::Write as _;

use anyhow::Result;
use bloomrf::baselines::ClassicBloom;
use bloomrf::{BloomRf, SegmentedBitArray};

/// Bucket `b` counts lengths in `[2^b, 2^{b+1})`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Histogram {
    pub buckets: Vec<u64>,
}

impl Histogram {
    fn add(&mut self, len: u64) {
        let b = (63 - len.leading_zeros()) as usize;
        if self.buckets.len() <= b {
            self.buckets.resize(b + 1, 0);
        }
        self.buckets[b] += 1;
    }

    pub fn total(&self) -> u64 {
        self.buckets.iter().sum()
    }

    pub fn get(&self, b: usize) -> u64 {
        self.buckets.get(b).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScatterStats {
    pub zero_runs: Histogram,
    pub gaps: Histogram,
    pub bits: u64,
}

/// Runs never cross segment boundaries.
pub fn scatter_of(store: &SegmentedBitArray) -> Result<ScatterStats> {
    let mut stats = ScatterStats::default();
    for seg in 0..store.segment_count() {
        let m = store.segment_bits(seg)?;
        let words = store.words(seg)?;
        stats.bits += m;
        let bit = |i: u64| words[(i / 64) as usize] >> (i % 64) & 1 == 1;
        let (mut i, mut seen_zero_run) = (0u64, false);
        while i < m {
            let one = bit(i);
            let start = i;
            while i < m && bit(i) == one {
                i += 1;
            }
            if one {
                // only ones strictly between two zero runs count as a distance
                if seen_zero_run && i < m {
                    stats.gaps.add(i - start);
                }
            } else {
                stats.zero_runs.add(i - start);
                seen_zero_run = true;
            }
        }
    }
    Ok(stats)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BucketDiff {
    pub bucket: usize,
    pub a: u64,
    pub b: u64,
    /// |a − b| / b, infinite when `b` is empty.
    pub rel_dev: f64,
}

/// Per-bucket deviation of `a` from the reference `b`, over buckets where
/// either side has at least `min_samples`.
pub fn compare(a: &Histogram, b: &Histogram, min_samples: u64) -> Vec<BucketDiff> {
    (0..a.buckets.len().max(b.buckets.len()))
        .filter(|&i| a.get(i).max(b.get(i)) >= min_samples)
        .map(|i| {
            let (x, y) = (a.get(i), b.get(i));
            let rel_dev = if y == 0 { f64::INFINITY } else { x.abs_diff(y) as f64 / y as f64 };
            BucketDiff { bucket: i, a: x, b: y, rel_dev }
        })
        .collect()
}

/// Classic Bloom filter with the bloomRF's total bits and one hash per
/// bloomRF hash function, holding the same keys.
pub fn matching_bloom(filter: &BloomRf, keys: &[u64]) -> Result<ClassicBloom> {
    let hashes: u32 = filter.config().replicas.iter().sum();
    let bloom = ClassicBloom::new(keys.len().max(1) as u64, filter.config().total_bits(), Some(hashes))?;
    keys.iter().for_each(|&k| bloom.insert(k));
    Ok(bloom)
}

pub const CSV_HEADER: &str = "filter,histogram,length_lo,length_hi,count";

pub fn csv_rows(name: &str, stats: &ScatterStats) -> String {
    let mut out = String::new();
    for (label, h) in [("zero_run", &stats.zero_runs), ("gap", &stats.gaps)] {
        for (b, &count) in h.buckets.iter().enumerate() {
            let _ = writeln!(out, "{name},{label},{},{},{count}", 1u64 << b, (1u128 << (b + 1)) - 1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_array_is_one_run() {
        let s = SegmentedBitArray::new(&[1000]).unwrap();
        let st = scatter_of(&s).unwrap();
        assert_eq!(st.zero_runs.total(), 1);
        assert_eq!(st.zero_runs.get(9), 1);
        assert_eq!(st.gaps.total(), 0);
    }

    #[test]
    fn full_array_has_no_runs() {
        let s = SegmentedBitArray::new(&[130]).unwrap();
        (0..130).for_each(|i| s.set_bit(0, i).unwrap());
        let st = scatter_of(&s).unwrap();
        assert_eq!(st.zero_runs.total(), 0);
        assert_eq!(st.gaps.total(), 0);
    }

    #[test]
    fn pattern() {
        // 0 1 1 0 0 0 1 0 | 1
        let s = SegmentedBitArray::new(&[9]).unwrap();
        for i in [1, 2, 6, 8] {
            s.set_bit(0, i).unwrap();
        }
        let st = scatter_of(&s).unwrap();
        assert_eq!(st.zero_runs.buckets, vec![2, 1]);
        assert_eq!(st.gaps.buckets, vec![1, 1]);
    }

    #[test]
    fn matching_bloom_has_equal_density() {
        let f = BloomRf::new(bloomrf::build_config(64, 1000, 10.0, None, None).unwrap()).unwrap();
        let keys: Vec<u64> = (0..1000u64).map(|i| i.wrapping_mul(0x9e37_79b9_7f4a_7c15)).collect();
        keys.iter().for_each(|&k| f.insert(k));
        let b = matching_bloom(&f, &keys).unwrap();
        assert_eq!(b.bits(), f.config().total_bits());
        let (x, y) = (f.store().set_bit_count(0).unwrap() as f64, b.store().set_bit_count(0).unwrap() as f64);
        assert!((x - y).abs() / y < 0.05, "{x} vs {y}");
    }

    #[test]
    fn comparison() {
        let a = Histogram { buckets: vec![100, 5, 200] };
        let b = Histogram { buckets: vec![110, 0, 0] };
        let d = compare(&a, &b, 100);
        assert_eq!(d.len(), 2);
        assert!((d[0].rel_dev - 10.0 / 110.0).abs() < 1e-12);
        assert!(d[1].rel_dev.is_infinite());
    }
}
