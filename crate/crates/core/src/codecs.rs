//! Order-preserving encodings of floats, strings and attribute pairs into
//! the 64-bit key domain.

use crate::error::{Error, Result};
use crate::hashing::hash_bytes;

const STRING_SEED: u64 = 0x5354_5249_4e47_0001;
const PREFIX_BYTES: usize = 7;

/// φ(x): sign-clear patterns get the top bit set, sign-set patterns are
/// inverted. −0.0 is encoded like +0.0 since the two compare equal.
pub fn encode_f64(x: f64) -> Result<u64> {
    if x.is_nan() {
        return Err(Error::arg("NaN has no position in the key order"));
    }
    let bits = if x == 0.0 { 0 } else { x.to_bits() };
    Ok(if bits >> 63 == 0 { bits | 1 << 63 } else { !bits })
}

/// Inverse of [`encode_f64`].
pub fn decode_f64(code: u64) -> f64 {
    f64::from_bits(if code >> 63 == 1 { code & !(1 << 63) } else { !code })
}

pub fn float_range_keys(lo: f64, hi: f64) -> Result<(u64, u64)> {
    let (a, b) = (encode_f64(lo)?, encode_f64(hi)?);
    if lo > hi {
        return Err(Error::arg(format!("inverted float range [{lo}, {hi}]")));
    }
    Ok((a, b))
}

fn prefix7(s: &[u8]) -> u64 {
    let mut buf = [0u8; 8];
    let n = s.len().min(PREFIX_BYTES);
    buf[..n].copy_from_slice(&s[..n]);
    u64::from_be_bytes(buf)
}

/// First seven bytes in the high bytes (zero padded); the low byte hashes
/// the remaining bytes together with the total length.
pub fn encode_string(s: &[u8]) -> u64 {
    let tail = &s[s.len().min(PREFIX_BYTES)..];
    let low = hash_bytes(STRING_SEED ^ s.len() as u64, tail) & 0xFF;
    prefix7(s) | low
}

/// Key bounds covering every string whose 7-byte prefix lies in `[lo, hi]`.
pub fn string_range_keys(lo: &[u8], hi: &[u8]) -> Result<(u64, u64)> {
    if lo > hi {
        return Err(Error::arg("inverted string range"));
    }
    Ok((prefix7(lo), prefix7(hi) | 0xFF))
}

/// Both concatenation orders of two reduced attributes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairCode {
    pub ab: u64,
    pub ba: u64,
}

/// Keeps the `precision` most significant bits of an attribute value.
pub fn reduce_attr(v: u64, precision: u32) -> u64 {
    v >> (64 - precision)
}

/// Reduces `a` and `b` to `precision` (≤ 32) bits and concatenates them both ways.
pub fn encode_pair(a: u64, b: u64, precision: u32) -> Result<PairCode> {
    if !(1..=32).contains(&precision) {
        return Err(Error::arg(format!("pair precision {precision} outside 1..=32")));
    }
    let (ra, rb) = (reduce_attr(a, precision), reduce_attr(b, precision));
    Ok(PairCode { ab: ra << precision | rb, ba: rb << precision | ra })
}

/// Range on the `ba` key for `B = b AND A ∈ [a_lo, a_hi]`.
pub fn pair_eq_range_keys(b: u64, a_lo: u64, a_hi: u64, precision: u32) -> Result<(u64, u64)> {
    if a_lo > a_hi {
        return Err(Error::arg("inverted attribute range"));
    }
    let lo = encode_pair(a_lo, b, precision)?.ba;
    let hi = encode_pair(a_hi, b, precision)?.ba;
    Ok((lo, hi))
}
