use crate::error::{Error, Result};
use crate::wire::{Reader, Writer};

pub const FENCE_MAGIC: &[u8; 4] = b"BFP1";

/// Min/max key per block of a sorted key list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FencePointers {
    block_size: u32,
    blocks: Vec<(u64, u64)>,
}

impl FencePointers {
    pub fn build(keys: &[u64], block_size: u32) -> Result<Self> {
        if block_size == 0 {
            return Err(Error::config("block size must be positive"));
        }
        let mut sorted = keys.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let blocks = sorted
            .chunks(block_size as usize)
            .map(|c| (c[0], c[c.len() - 1]))
            .collect();
        Ok(FencePointers { block_size, blocks })
    }

    pub fn blocks(&self) -> &[(u64, u64)] {
        &self.blocks
    }

    pub fn block_size(&self) -> u32 {
        self.block_size
    }

    pub fn size_bits(&self) -> u64 {
        self.blocks.len() as u64 * 128
    }

    pub fn fence_range(&self, lo: u64, hi: u64) -> Result<bool> {
        if lo > hi {
            return Err(Error::arg(format!("inverted interval [{lo}, {hi}]")));
        }
        let i = self.blocks.partition_point(|&(_, max)| max < lo);
        Ok(self.blocks.get(i).is_some_and(|&(min, _)| min <= hi))
    }

    pub fn point_lookup(&self, key: u64) -> bool {
        self.fence_range(key, key).expect("point interval is ordered")
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(FENCE_MAGIC);
        w.u32(self.block_size);
        w.u64(self.blocks.len() as u64);
        w.end_header();
        for &(a, b) in &self.blocks {
            w.u64(a);
            w.u64(b);
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::open(bytes, FENCE_MAGIC)?;
        let block_size = r.u32()?;
        let count = r.u64()?;
        r.check_header()?;
        let words = r.words(count.checked_mul(2).ok_or(Error::Truncated)?)?;
        r.finish()?;
        let blocks: Vec<(u64, u64)> = words.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let ordered = blocks.iter().all(|&(a, b)| a <= b) && blocks.windows(2).all(|w| w[0].1 < w[1].0);
        if block_size == 0 || !ordered {
            return Err(Error::Malformed("fence blocks out of order".into()));
        }
        Ok(FencePointers { block_size, blocks })
    }
}
