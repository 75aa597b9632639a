//! Range lookup: a top-down walk over the layers, carrying at most two
//! coverings (the partial intervals around each bound) from layer to layer.

use super::BloomRf;
use crate::error::{Error, Result};
use crate::hashing::{shr, LayerHashSpec};

/// One pending test. Non-covering items span prefixes of one word on
/// `layer`; covering items are a single prefix on `layer`'s level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub l_key: u64,
    pub r_key: u64,
    pub layer: usize,
    pub is_covering: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AccessStats {
    pub word_reads: u64,
    pub bit_reads: u64,
}

impl AccessStats {
    pub fn total(&self) -> u64 {
        self.word_reads + self.bit_reads
    }
}

pub(crate) trait Tally {
    fn word(&mut self);
    fn bit(&mut self);
}

impl Tally for () {
    #[inline(always)]
    fn word(&mut self) {}
    #[inline(always)]
    fn bit(&mut self) {}
}

impl Tally for AccessStats {
    #[inline]
    fn word(&mut self) {
        self.word_reads += 1;
    }
    #[inline]
    fn bit(&mut self) {
        self.bit_reads += 1;
    }
}

/// Ones at offsets `a..=b` (LSB-first).
#[inline]
fn span_mask(a: u64, b: u64) -> u64 {
    (u64::MAX >> (63 - b)) & (u64::MAX << a)
}

/// Word mask of a non-covering check on `spec`'s layer.
pub fn bit_mask(check: &CheckItem, spec: &LayerHashSpec) -> Result<u64> {
    if check.l_key > check.r_key || shr(check.l_key, spec.word_shift()) != shr(check.r_key, spec.word_shift()) {
        return Err(Error::Internal(format!(
            "check [{}, {}] spans more than one word of layer {}",
            check.l_key, check.r_key, spec.layer_index
        )));
    }
    Ok(span_mask(spec.offset(check.l_key), spec.offset(check.r_key)))
}

struct Checks {
    items: [CheckItem; 6],
    len: usize,
}

impl Checks {
    fn new() -> Self {
        let blank = CheckItem { l_key: 0, r_key: 0, layer: 0, is_covering: false };
        Checks { items: [blank; 6], len: 0 }
    }

    #[inline]
    fn push(&mut self, lo_prefix: u128, hi_prefix: u128, level: u32, layer: usize, is_covering: bool) {
        debug_assert!(self.len < 6);
        let r_key = (((hi_prefix + 1) << level) - 1).min(u128::from(u64::MAX));
        self.items[self.len] = CheckItem {
            l_key: (lo_prefix << level) as u64,
            r_key: r_key as u64,
            layer,
            is_covering,
        };
        self.len += 1;
    }
}

impl BloomRf {
    #[inline]
    fn test_covering<T: Tally>(&self, check: &CheckItem, t: &mut T) -> bool {
        let spec = &self.layers[check.layer];
        (0..spec.seeds.len()).all(|rep| {
            t.bit();
            let (seg, pos) = self.code_position(check.layer, rep, check.l_key);
            self.store.test_unchecked(seg, pos)
        })
    }

    #[inline]
    fn test_piece<T: Tally>(&self, check: &CheckItem, t: &mut T) -> bool {
        let spec = &self.layers[check.layer];
        let seg = spec.segment;
        let m = self.seg_bits[seg];
        let wb = spec.word_bits();
        let top_offset = spec.word_width() - 1;
        let mirrored = self.reversed(check.l_key);
        let mask_of = |a: u64, b: u64| {
            let (oa, ob) = (a & top_offset, b & top_offset);
            if mirrored {
                span_mask(top_offset - ob, top_offset - oa)
            } else {
                span_mask(oa, ob)
            }
        };
        let fetch = |rep: usize| self.store.fetch_unchecked(seg, spec.word_index(rep, check.l_key, m) << wb, 1 << wb);
        let a = shr(check.l_key, spec.level);
        let b = shr(check.r_key, spec.level);
        let replicas = spec.seeds.len();
        if replicas == 1 {
            t.word();
            return fetch(0) & mask_of(a, b) != 0;
        }
        let mut words = [0u64; super::MAX_REPLICAS as usize];
        for (rep, w) in words.iter_mut().enumerate().take(replicas) {
            t.word();
            *w = fetch(rep);
        }
        // each dyadic block of the run must hit in every replica
        let mut x = a;
        while x <= b {
            let mut size = if x == 0 { 1u64 << 63 } else { 1u64 << x.trailing_zeros() };
            while size > b - x + 1 {
                size >>= 1;
            }
            let mask = mask_of(x, x + size - 1);
            if words[..replicas].iter().all(|w| w & mask != 0) {
                return true;
            }
            x += size;
            if x == 0 {
                break;
            }
        }
        false
    }

    pub(crate) fn range_impl<T: Tally>(&self, l: u64, r: u64, t: &mut T) -> bool {
        let lo = u128::from(l);
        let end = u128::from(r) + 1;
        let first_in = |lv: u32| (lo + (1u128 << lv) - 1) >> lv;
        let end_in = |lv: u32| end >> lv;

        // Unrepresented levels: anything fully inside is a conservative hit,
        // unless the exact bitmap can answer for a single piece on its level.
        let top = self.top_level;
        let (fi, ei) = (first_in(top), end_in(top));
        if fi < ei {
            if self.config.exact_level.is_none() {
                return true;
            }
            let len = ei - fi;
            if len > 2 || (len == 2 && fi & 1 == 0) {
                return true;
            }
            for p in fi..ei {
                t.bit();
                if self.store.test_unchecked(0, p as u64) {
                    return true;
                }
            }
        }
        let mut cov = [0u128; 2];
        let mut nc = 0;
        let (pl, pr) = (lo >> top, (end - 1) >> top);
        let left_partial = pl < fi;
        if left_partial {
            cov[nc] = pl;
            nc += 1;
        }
        if pr >= ei && !(pr == pl && left_partial) {
            cov[nc] = pr;
            nc += 1;
        }
        if self.config.exact_level.is_some() {
            let mut kept = 0;
            for i in 0..nc {
                t.bit();
                if self.store.test_unchecked(0, cov[i] as u64) {
                    cov[kept] = cov[i];
                    kept += 1;
                }
            }
            nc = kept;
        }

        for (ti, spec) in self.layers.iter().enumerate().rev() {
            if nc == 0 {
                return false;
            }
            let lt = spec.level;
            let (fi, ei) = (first_in(lt), end_in(lt));
            let (pl, pr) = (lo >> lt, (end - 1) >> lt);
            let left_partial = pl < fi;
            let w = 1u128 << (spec.delta - 1);
            let mut checks = Checks::new();
            for &c in &cov[..nc] {
                let cs = c << spec.delta;
                let ce = cs + (1u128 << spec.delta);
                let (a, b) = (cs.max(fi), ce.min(ei));
                let mut x = a;
                while x < b {
                    let y = ((x / w + 1) * w).min(b);
                    checks.push(x, y - 1, lt, ti, false);
                    x = y;
                }
                if left_partial && (cs..ce).contains(&pl) {
                    checks.push(pl, pl, lt, ti, true);
                }
                if pr >= ei && (cs..ce).contains(&pr) && !(pr == pl && left_partial) {
                    checks.push(pr, pr, lt, ti, true);
                }
            }
            nc = 0;
            for check in &checks.items[..checks.len] {
                if check.is_covering {
                    if self.test_covering(check, t) {
                        cov[nc] = u128::from(check.l_key) >> lt;
                        nc += 1;
                    }
                } else if self.test_piece(check, t) {
                    return true;
                }
            }
        }
        false
    }
}
