//! Segmented bit array backed by atomic 64-bit words.
//!
//! Bits are numbered LSB-first inside each word: bit `p` of a segment lives in
//! word `p / 64` at shift `p % 64`. Writes are atomic ORs, so any number of
//! threads may set and test bits concurrently.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

#[derive(Debug)]
struct Segment {
    bits: u64,
    words: Box<[AtomicU64]>,
    ones: AtomicU64,
}

impl Segment {
    fn new(bits: u64) -> Self {
        let n = bits.div_ceil(64) as usize;
        Segment {
            bits,
            words: (0..n).map(|_| AtomicU64::new(0)).collect(),
            ones: AtomicU64::new(0),
        }
    }
}

#[derive(Debug)]
pub struct SegmentedBitArray {
    segments: Vec<Segment>,
}

impl SegmentedBitArray {
    /// Allocates zeroed segments. Every size must be positive.
    pub fn new(segment_sizes: &[u64]) -> Result<Self> {
        if segment_sizes.is_empty() {
            return Err(Error::config("at least one segment is required"));
        }
        if let Some(j) = segment_sizes.iter().position(|&m| m == 0) {
            return Err(Error::config(format!("segment {j} has zero bits")));
        }
        Ok(SegmentedBitArray {
            segments: segment_sizes.iter().map(|&m| Segment::new(m)).collect(),
        })
    }

    /// Rebuilds a store from serialized payload words.
    pub fn from_words(segment_sizes: &[u64], payload: Vec<Vec<u64>>) -> Result<Self> {
        let store = Self::new(segment_sizes)?;
        if payload.len() != segment_sizes.len() {
            return Err(Error::Malformed("segment count mismatch".into()));
        }
        for (seg, words) in store.segments.iter().zip(payload) {
            if words.len() != seg.words.len() {
                return Err(Error::Malformed("segment payload length mismatch".into()));
            }
            let tail = seg.bits % 64;
            if tail != 0 && words[words.len() - 1] >> tail != 0 {
                return Err(Error::Malformed("bits set past segment end".into()));
            }
            let mut ones = 0u64;
            for (slot, w) in seg.words.iter().zip(words) {
                slot.store(w, Ordering::Relaxed);
                ones += u64::from(w.count_ones());
            }
            seg.ones.store(ones, Ordering::Relaxed);
        }
        Ok(store)
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    pub fn segment_bits(&self, segment: usize) -> Result<u64> {
        Ok(self.seg(segment)?.bits)
    }

    pub fn segment_sizes(&self) -> Vec<u64> {
        self.segments.iter().map(|s| s.bits).collect()
    }

    pub fn total_bits(&self) -> u64 {
        self.segments.iter().map(|s| s.bits).sum()
    }

    fn seg(&self, segment: usize) -> Result<&Segment> {
        self.segments.get(segment).ok_or(Error::NoSuchSegment(segment))
    }

    fn locate(&self, segment: usize, pos: u64) -> Result<&Segment> {
        let seg = self.seg(segment)?;
        if pos >= seg.bits {
            return Err(Error::OutOfBounds { segment, pos, bits: seg.bits });
        }
        Ok(seg)
    }

    pub fn set_bit(&self, segment: usize, pos: u64) -> Result<()> {
        let seg = self.locate(segment, pos)?;
        set_in(seg, pos);
        Ok(())
    }

    pub fn test_bit(&self, segment: usize, pos: u64) -> Result<bool> {
        let seg = self.locate(segment, pos)?;
        Ok(test_in(seg, pos))
    }

    /// Reads `width_bits` bits starting at `word_index * width_bits`.
    /// In-word offset 0 is the least-significant bit of the result.
    pub fn fetch_word(&self, segment: usize, word_index: u64, width_bits: u32) -> Result<u64> {
        if width_bits == 0 || width_bits > 64 || !width_bits.is_power_of_two() {
            return Err(Error::InvalidWidth(width_bits));
        }
        let seg = self.seg(segment)?;
        let w = u64::from(width_bits);
        let end = word_index.checked_add(1).and_then(|i| i.checked_mul(w));
        match end {
            Some(end) if end <= seg.bits => Ok(fetch_in(seg, word_index * w, width_bits)),
            _ => Err(Error::OutOfBounds {
                segment,
                pos: word_index.saturating_mul(w),
                bits: seg.bits,
            }),
        }
    }

    pub fn set_bit_count(&self, segment: usize) -> Result<u64> {
        Ok(self.seg(segment)?.ones.load(Ordering::Acquire))
    }

    /// Snapshot of a segment's payload words.
    pub fn words(&self, segment: usize) -> Result<Vec<u64>> {
        Ok(self
            .seg(segment)?
            .words
            .iter()
            .map(|w| w.load(Ordering::Acquire))
            .collect())
    }

    // Unchecked accessors for the filter hot paths. Callers guarantee bounds.

    #[inline]
    pub(crate) fn set_unchecked(&self, segment: usize, pos: u64) {
        debug_assert!(pos < self.segments[segment].bits);
        set_in(&self.segments[segment], pos);
    }

    #[inline]
    pub(crate) fn test_unchecked(&self, segment: usize, pos: u64) -> bool {
        debug_assert!(pos < self.segments[segment].bits);
        test_in(&self.segments[segment], pos)
    }

    #[inline]
    pub(crate) fn fetch_unchecked(&self, segment: usize, first_bit: u64, width_bits: u32) -> u64 {
        fetch_in(&self.segments[segment], first_bit, width_bits)
    }
}

#[inline]
fn set_in(seg: &Segment, pos: u64) {
    let bit = 1u64 << (pos % 64);
    let prev = seg.words[(pos / 64) as usize].fetch_or(bit, Ordering::AcqRel);
    if prev & bit == 0 {
        seg.ones.fetch_add(1, Ordering::AcqRel);
    }
}

#[inline]
fn test_in(seg: &Segment, pos: u64) -> bool {
    seg.words[(pos / 64) as usize].load(Ordering::Acquire) >> (pos % 64) & 1 == 1
}

#[inline]
fn fetch_in(seg: &Segment, first_bit: u64, width_bits: u32) -> u64 {
    let word = seg.words[(first_bit / 64) as usize].load(Ordering::Acquire);
    let shifted = word >> (first_bit % 64);
    if width_bits == 64 {
        shifted
    } else {
        shifted & ((1u64 << width_bits) - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn set_then_test() {
        let s = SegmentedBitArray::new(&[128]).unwrap();
        assert!(!s.test_bit(0, 5).unwrap());
        s.set_bit(0, 5).unwrap();
        assert!(s.test_bit(0, 5).unwrap());
        s.set_bit(0, 5).unwrap();
        assert_eq!(s.set_bit_count(0).unwrap(), 1);
    }

    #[test]
    fn word_of_adjacent_offsets() {
        let s = SegmentedBitArray::new(&[64]).unwrap();
        for p in [2, 3, 8, 10, 16, 24] {
            s.set_bit(0, p).unwrap();
        }
        for p in [2, 3, 8, 10, 16, 24] {
            assert!(s.test_bit(0, p).unwrap());
        }
        assert_eq!(s.fetch_word(0, 0, 8).unwrap(), 0x0C);
        assert_eq!(s.fetch_word(0, 1, 8).unwrap(), 0x05);
        assert_eq!(s.fetch_word(0, 0, 64).unwrap(), 0x0101_050C);
    }

    #[test]
    fn bounds_and_widths() {
        let s = SegmentedBitArray::new(&[64, 128]).unwrap();
        assert!(matches!(s.set_bit(0, 64), Err(Error::OutOfBounds { .. })));
        assert!(matches!(s.test_bit(2, 0), Err(Error::NoSuchSegment(2))));
        assert!(matches!(s.fetch_word(1, 0, 3), Err(Error::InvalidWidth(3))));
        assert!(matches!(s.fetch_word(1, 2, 64), Err(Error::OutOfBounds { .. })));
        assert_eq!(s.fetch_word(1, 1, 64).unwrap(), 0);
        assert!(SegmentedBitArray::new(&[0]).is_err());
    }

    #[test]
    fn payload_round_trip() {
        let s = SegmentedBitArray::new(&[64, 32]).unwrap();
        s.set_bit(0, 63).unwrap();
        s.set_bit(1, 31).unwrap();
        let t = SegmentedBitArray::from_words(&[64, 32], vec![s.words(0).unwrap(), s.words(1).unwrap()])
            .unwrap();
        assert_eq!(t.set_bit_count(0).unwrap(), 1);
        assert!(t.test_bit(1, 31).unwrap());
        assert!(SegmentedBitArray::from_words(&[64, 32], vec![vec![0], vec![1 << 40]]).is_err());
    }

    #[test]
    fn concurrent_writers_agree_on_count() {
        let s = SegmentedBitArray::new(&[4096]).unwrap();
        std::thread::scope(|sc| {
            for t in 0..4u64 {
                let s = &s;
                sc.spawn(move || {
                    for p in 0..4096u64 {
                        if (p + t) % 3 != 0 {
                            s.set_bit(0, p).unwrap();
                        }
                    }
                });
            }
        });
        let pop: u32 = s.words(0).unwrap().iter().map(|w| w.count_ones()).sum();
        assert_eq!(u64::from(pop), s.set_bit_count(0).unwrap());
        assert_eq!(pop, 4096);
    }

    proptest! {
        #[test]
        fn matches_naive_bool_array(
            sizes in prop::collection::vec(1u64..4, 1..4),
            ops in prop::collection::vec((0usize..4, 0u64..256), 0..300),
        ) {
            let sizes: Vec<u64> = sizes.iter().map(|s| s * 64).collect();
            let store = SegmentedBitArray::new(&sizes).unwrap();
            let mut naive: Vec<Vec<bool>> = sizes.iter().map(|&m| vec![false; m as usize]).collect();
            for (seg, pos) in ops {
                let seg = seg % sizes.len();
                let pos = pos % sizes[seg];
                store.set_bit(seg, pos).unwrap();
                naive[seg][pos as usize] = true;
            }
            for (j, bits) in naive.iter().enumerate() {
                for (p, &b) in bits.iter().enumerate() {
                    prop_assert_eq!(store.test_bit(j, p as u64).unwrap(), b);
                }
                let ones = bits.iter().filter(|&&b| b).count() as u64;
                prop_assert_eq!(store.set_bit_count(j).unwrap(), ones);
                for width in [1u32, 2, 4, 8, 16, 32, 64] {
                    for w in 0..(sizes[j] / u64::from(width)) {
                        let word = store.fetch_word(j, w, width).unwrap();
                        for b in 0..u64::from(width) {
                            let p = (w * u64::from(width) + b) as usize;
                            prop_assert_eq!(word >> b & 1 == 1, bits[p]);
                        }
                    }
                }
            }
        }
    }
}
