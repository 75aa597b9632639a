//! Base mixer, layer specifications and piecewise-monotone hash functions.
//!
//! A PMHF for layer `i` maps the prefix `x >> ℓ_i` to a bit position. The
//! high part of the prefix (`x >> (ℓ_i + Δ_i - 1)`) is hashed to a word of
//! `2^(Δ_i - 1)` bits; the low `Δ_i - 1` prefix bits become the offset inside
//! that word, so neighbouring prefixes land on neighbouring bits.

const MIX_A: u64 = 0xbf58_476d_1ce4_e5b9;
const MIX_B: u64 = 0x94d0_49bb_1331_11eb;
const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_A);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_B);
    z ^ (z >> 31)
}

/// Seeded 64-bit mixer. Frozen: changing it invalidates every filter file.
#[inline]
pub fn base_hash(seed: u64, value: u64) -> u64 {
    mix64(mix64(value.wrapping_add(GOLDEN)) ^ seed)
}

/// Hashes a byte string (8-byte little-endian chunks, then the length).
pub fn hash_bytes(seed: u64, bytes: &[u8]) -> u64 {
    let mut h = seed;
    let mut chunks = bytes.chunks_exact(8);
    for c in &mut chunks {
        h = base_hash(h, u64::from_le_bytes(c.try_into().unwrap()));
    }
    let rest = chunks.remainder();
    if !rest.is_empty() {
        let mut buf = [0u8; 8];
        buf[..rest.len()].copy_from_slice(rest);
        h = base_hash(h, u64::from_le_bytes(buf));
    }
    base_hash(h, bytes.len() as u64)
}

/// `count` pairwise-distinct seeds drawn from a splitmix64 stream.
pub fn derive_seeds(master: u64, count: usize) -> Vec<u64> {
    let mut state = master;
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count {
        state = state.wrapping_add(GOLDEN);
        let s = mix64(state);
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// Right shift that saturates to zero for shifts of 64 or more.
#[inline]
pub fn shr(x: u64, s: u32) -> u64 {
    if s >= 64 {
        0
    } else {
        x >> s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerHashSpec {
    pub layer_index: usize,
    /// ℓ_i: the dyadic level this layer hashes.
    pub level: u32,
    /// Δ_i: distance to the next layer's level.
    pub delta: u32,
    /// Zero-based segment index.
    pub segment: usize,
    /// One seed per replica.
    pub seeds: Vec<u64>,
}

impl LayerHashSpec {
    #[inline]
    pub fn word_bits(&self) -> u32 {
        self.delta - 1
    }

    #[inline]
    pub fn word_width(&self) -> u64 {
        1u64 << (self.delta - 1)
    }

    #[inline]
    pub fn replica_count(&self) -> usize {
        self.seeds.len()
    }

    #[inline]
    fn offset_mask(&self) -> u64 {
        self.word_width() - 1
    }

    /// Shift that turns a key into the hashed word key of this layer.
    #[inline]
    pub fn word_shift(&self) -> u32 {
        self.level + self.delta - 1
    }

    /// Word index of the prefix `x >> ℓ_i` under replica `replica`.
    #[inline]
    pub fn word_index(&self, replica: usize, x: u64, m_j: u64) -> u64 {
        let words = m_j >> self.word_bits();
        base_hash(self.seeds[replica], shr(x, self.word_shift())) % words
    }

    #[inline]
    pub fn offset(&self, x: u64) -> u64 {
        shr(x, self.level) & self.offset_mask()
    }
}

/// Bit position of key `x` in layer `spec` under `replica`.
#[inline]
pub fn pmhf_position(spec: &LayerHashSpec, replica: usize, x: u64, m_j: u64) -> u64 {
    (spec.word_index(replica, x, m_j) << spec.word_bits()) + spec.offset(x)
}

/// `(word index, in-word offset)` of [`pmhf_position`].
#[inline]
pub fn pmhf_word(spec: &LayerHashSpec, replica: usize, x: u64, m_j: u64) -> (u64, u64) {
    (spec.word_index(replica, x, m_j), spec.offset(x))
}

/// Same word as [`pmhf_position`], offset mirrored inside the word.
#[inline]
pub fn reverse_pmhf_position(spec: &LayerHashSpec, replica: usize, x: u64, m_j: u64) -> u64 {
    (spec.word_index(replica, x, m_j) << spec.word_bits()) + (spec.offset_mask() - spec.offset(x))
}

/// Orientation predicate for the reverse-order mitigation. `top_shift` is the
/// word shift of the topmost layer, so all prefixes sharing a word of any
/// layer share an orientation.
#[inline]
pub fn is_reversed(orientation_seed: u64, x: u64, top_shift: u32) -> bool {
    base_hash(orientation_seed, shr(x, top_shift)) & 1 == 1
}
