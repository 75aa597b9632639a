//! Flat little-endian replay files.
//!
//! Key files are a bare stream of u64. Query files are rows of a tag byte
//! (0 = point, 1 = range) followed by one or two u64.

use std::io::{Read, Write};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Query {
    Point(u64),
    Range(u64, u64),
}

pub fn write_u64s<W: Write>(mut out: W, values: &[u64]) -> Result<()> {
    let mut buf = Vec::with_capacity(values.len() * 8);
    for v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn read_u64s<R: Read>(mut input: R) -> Result<Vec<u64>> {
    let mut buf = Vec::new();
    input.read_to_end(&mut buf)?;
    if buf.len() % 8 != 0 {
        return Err(Error::Malformed(format!("key stream length {} is not a multiple of 8", buf.len())));
    }
    Ok(buf.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect())
}

pub fn write_queries<W: Write>(mut out: W, queries: &[Query]) -> Result<()> {
    let mut buf = Vec::with_capacity(queries.len() * 17);
    for q in queries {
        match *q {
            Query::Point(k) => {
                buf.push(0);
                buf.extend_from_slice(&k.to_le_bytes());
            }
            Query::Range(l, r) => {
                buf.push(1);
                buf.extend_from_slice(&l.to_le_bytes());
                buf.extend_from_slice(&r.to_le_bytes());
            }
        }
    }
    out.write_all(&buf)?;
    Ok(())
}

/// Parses a query file. Range rows are returned as written, inverted or not.
pub fn read_queries<R: Read>(mut input: R) -> Result<Vec<Query>> {
    let mut buf = Vec::new();
    input.read_to_end(&mut buf)?;
    let mut out = Vec::new();
    let mut rest = buf.as_slice();
    let word = |s: &[u8]| u64::from_le_bytes(s.try_into().unwrap());
    while let Some((&tag, tail)) = rest.split_first() {
        match tag {
            0 if tail.len() >= 8 => {
                out.push(Query::Point(word(&tail[..8])));
                rest = &tail[8..];
            }
            1 if tail.len() >= 16 => {
                out.push(Query::Range(word(&tail[..8]), word(&tail[8..16])));
                rest = &tail[16..];
            }
            0 | 1 => return Err(Error::Truncated),
            t => return Err(Error::Malformed(format!("unknown query tag {t} in row {}", out.len()))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let keys = vec![0, 1, u64::MAX, 42];
        let mut buf = Vec::new();
        write_u64s(&mut buf, &keys).unwrap();
        assert_eq!(buf.len(), 32);
        assert_eq!(read_u64s(buf.as_slice()).unwrap(), keys);
        assert!(read_u64s(&buf[..5]).is_err());

        let qs = vec![Query::Point(3), Query::Range(9, 4), Query::Range(0, u64::MAX)];
        let mut buf = Vec::new();
        write_queries(&mut buf, &qs).unwrap();
        assert_eq!(buf.len(), 9 + 17 + 17);
        assert_eq!(read_queries(buf.as_slice()).unwrap(), qs);
        assert!(matches!(read_queries(&buf[..12]), Err(Error::Truncated)));
        assert!(read_queries(&[7u8, 0, 0][..]).is_err());
    }
}
