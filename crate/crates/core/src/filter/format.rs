//! `BRF1` file format, little-endian throughout:
//!
//! ```text
//! magic "BRF1" | version u16 | d u8 | k u8 | S u8 | flags u8 | exact_level u8 (0xFF = none)
//! Δ[k] u8 | r[k] u8 | j[k] u8            (bottom layer first, j is 1-based)
//! segment bits S × u64 | inserted_count u64 | seed count u16 | seeds × u64
//! header CRC32 u32
//! payload: ⌈m_j / 64⌉ words per segment, u64 each
//! payload CRC32 u32
//! ```
//!
//! Seeds are listed per layer and replica, bottom layer first, followed by the
//! orientation seed of the reverse-order mitigation. Flag bit 0 enables it.

use std::io::{Read, Write};

use super::{BloomRf, FilterConfig};
use crate::bitstore::SegmentedBitArray;
use crate::error::{Error, Result};
use crate::wire::{Reader, Writer};

pub const MAGIC: &[u8; 4] = b"BRF1";
const NO_EXACT: u8 = 0xFF;

impl BloomRf {
    pub fn to_bytes(&self) -> Vec<u8> {
        let c = &self.config;
        let mut w = Writer::new(MAGIC);
        w.u8(c.domain_bits as u8);
        w.u8(c.k() as u8);
        w.u8(c.segment_bits.len() as u8);
        w.u8(u8::from(c.reverse_mitigation));
        w.u8(c.exact_level.map_or(NO_EXACT, |l| l as u8));
        for v in [&c.deltas, &c.replicas, &c.segment_assignment] {
            for &x in v.iter() {
                w.u8(x as u8);
            }
        }
        for &m in &c.segment_bits {
            w.u64(m);
        }
        w.u64(self.inserted_count());
        w.u16(c.seeds.len() as u16);
        for &s in &c.seeds {
            w.u64(s);
        }
        w.end_header();
        for j in 0..c.segment_bits.len() {
            for word in self.store.words(j).expect("segment exists") {
                w.u64(word);
            }
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::open(bytes, MAGIC)?;
        let d = u32::from(r.u8()?);
        let k = usize::from(r.u8()?);
        let s = usize::from(r.u8()?);
        let flags = r.u8()?;
        if flags & !1 != 0 {
            return Err(Error::Malformed(format!("unknown flags {flags:#04x}")));
        }
        let exact = r.u8()?;
        let vec_u32 = |r: &mut Reader| -> Result<Vec<u32>> { Ok(r.bytes(k)?.iter().map(|&b| u32::from(b)).collect()) };
        let deltas = vec_u32(&mut r)?;
        let replicas = vec_u32(&mut r)?;
        let segment_assignment = vec_u32(&mut r)?;
        let segment_bits = (0..s).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
        let inserted = r.u64()?;
        let seed_count = r.u16()?;
        let seeds = (0..seed_count).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
        r.check_header()?;

        let config = FilterConfig {
            domain_bits: d,
            expected_keys: inserted.max(1),
            deltas,
            replicas,
            segment_assignment,
            segment_bits,
            exact_level: (exact != NO_EXACT).then_some(u32::from(exact)),
            seeds,
            reverse_mitigation: flags & 1 == 1,
        };
        config.validate()?;
        let payload = config
            .segment_bits
            .iter()
            .map(|&m| r.words(m.div_ceil(64)))
            .collect::<Result<Vec<_>>>()?;
        r.finish()?;
        let store = SegmentedBitArray::from_words(&config.segment_bits, payload)?;
        Ok(Self::assemble(config, store, inserted))
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut input: R) -> Result<Self> {
        let mut buf = Vec::new();
        input.read_to_end(&mut buf)?;
        Self::from_bytes(&buf)
    }
}
