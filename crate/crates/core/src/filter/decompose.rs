use crate::error::{Error, Result};

/// `[lo, hi]` with `hi - lo + 1 == 2^level` and `lo` aligned to `2^level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DyadicInterval {
    pub level: u32,
    pub lo: u64,
    pub hi: u64,
}

impl DyadicInterval {
    /// The interval on `level` containing `key`.
    pub fn containing(key: u64, level: u32) -> Self {
        if level >= 64 {
            return DyadicInterval { level, lo: 0, hi: u64::MAX };
        }
        let lo = key >> level << level;
        DyadicInterval { level, lo, hi: lo + ((1u64 << level) - 1) }
    }

    pub fn contains(&self, other: &DyadicInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicDecomposition {
    /// Maximal dyadic intervals inside the query, in ascending order.
    pub pieces: Vec<DyadicInterval>,
    /// Intervals on layer levels that contain a query bound but are not
    /// inside the query, highest level first.
    pub coverings: Vec<DyadicInterval>,
}

/// Two-path decomposition of `[l, r]` over a `d`-bit domain. Coverings are
/// reported on every layer level of `deltas` (bottom-first) plus the top
/// level: the exact level when set, otherwise ΣΔ, clipped to `d`.
pub fn decompose(d: u32, l: u64, r: u64, deltas: &[u32], exact_level: Option<u32>) -> Result<DyadicDecomposition> {
    if l > r {
        return Err(Error::arg(format!("inverted interval [{l}, {r}]")));
    }
    if d < 64 && r >> d != 0 {
        return Err(Error::arg(format!("{r} outside the {d}-bit domain")));
    }
    let pieces = pieces(l, r);

    let mut levels: Vec<u32> = deltas
        .iter()
        .scan(0u32, |acc, &dl| {
            let lv = *acc;
            *acc += dl;
            Some(lv)
        })
        .collect();
    levels.push(exact_level.unwrap_or_else(|| deltas.iter().sum()));
    let mut coverings = Vec::new();
    for &level in levels.iter().rev() {
        let level = level.min(d);
        if coverings.last().is_some_and(|c: &DyadicInterval| c.level == level) {
            continue;
        }
        let left = DyadicInterval::containing(l, level);
        let right = DyadicInterval::containing(r, level);
        if left.lo < l || left.hi > r {
            coverings.push(left);
        }
        if right != left && (right.lo < l || right.hi > r) {
            coverings.push(right);
        }
    }
    Ok(DyadicDecomposition { pieces, coverings })
}

/// Bottom-up two-path walk: the left bound climbs while peeling pieces off
/// its side, the right bound likewise, until they meet.
fn pieces(l: u64, r: u64) -> Vec<DyadicInterval> {
    let (mut lo, mut end) = (u128::from(l), u128::from(r) + 1);
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut level = 0u32;
    while lo < end {
        let size = 1u128 << level;
        if lo & size != 0 {
            left.push(DyadicInterval { level, lo: lo as u64, hi: (lo + size - 1) as u64 });
            lo += size;
        }
        if lo < end && end & size != 0 {
            right.push(DyadicInterval { level, lo: (end - size) as u64, hi: (end - 1) as u64 });
            end -= size;
        }
        level += 1;
    }
    right.reverse();
    left.extend(right);
    left
}
