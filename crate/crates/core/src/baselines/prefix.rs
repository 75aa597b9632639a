use super::bloom::ClassicBloom;
use crate::error::{Error, Result};
use crate::hashing::shr;
use crate::wire::{Reader, Writer};

pub const PREFIX_MAGIC: &[u8; 4] = b"BPF1";

/// Ranges spanning more prefixes than this answer true without probing.
pub const MAX_PREFIX_PROBES: u64 = 1 << 16;

/// Classic Bloom over `key >> prefix_level`.
#[derive(Debug)]
pub struct PrefixBloom {
    inner: ClassicBloom,
    prefix_level: u32,
}

impl PrefixBloom {
    pub fn new(expected_keys: u64, m_bits: u64, prefix_level: u32, k: Option<u32>) -> Result<Self> {
        if prefix_level > 64 {
            return Err(Error::config(format!("prefix level {prefix_level} above 64")));
        }
        Ok(PrefixBloom { inner: ClassicBloom::new(expected_keys, m_bits, k)?, prefix_level })
    }

    /// Prefix level ⌈log2 R⌉ for a target range size.
    pub fn level_for_range(range: u64) -> u32 {
        64 - range.max(1).saturating_sub(1).leading_zeros()
    }

    pub fn prefix_level(&self) -> u32 {
        self.prefix_level
    }

    pub fn bloom(&self) -> &ClassicBloom {
        &self.inner
    }

    pub fn insert(&self, key: u64) {
        self.inner.insert(shr(key, self.prefix_level));
    }

    pub fn point_lookup(&self, key: u64) -> bool {
        self.inner.point_lookup(shr(key, self.prefix_level))
    }

    pub fn range_lookup(&self, lo: u64, hi: u64) -> Result<bool> {
        Ok(self.range_probes(lo, hi)?.0)
    }

    /// Answer plus the number of prefix probes issued.
    pub fn range_probes(&self, lo: u64, hi: u64) -> Result<(bool, u64)> {
        if lo > hi {
            return Err(Error::arg(format!("inverted interval [{lo}, {hi}]")));
        }
        let (a, b) = (shr(lo, self.prefix_level), shr(hi, self.prefix_level));
        if b - a >= MAX_PREFIX_PROBES {
            return Ok((true, 0));
        }
        let mut probes = 0;
        for p in a..=b {
            probes += 1;
            if self.inner.point_lookup(p) {
                return Ok((true, probes));
            }
        }
        Ok((false, probes))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(PREFIX_MAGIC);
        w.u8(self.prefix_level as u8);
        self.inner.write_fields(&mut w);
        w.end_header();
        self.inner.write_payload(&mut w);
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::open(bytes, PREFIX_MAGIC)?;
        let prefix_level = u32::from(r.u8()?);
        if prefix_level > 64 {
            return Err(Error::Malformed(format!("prefix level {prefix_level}")));
        }
        let (m, expected, inserted, seeds) = ClassicBloom::read_fields(&mut r)?;
        r.check_header()?;
        let inner = ClassicBloom::from_parts(m, expected, inserted, seeds, &mut r)?;
        r.finish()?;
        Ok(PrefixBloom { inner, prefix_level })
    }
}
