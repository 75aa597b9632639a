//! Little-endian envelope shared by all filter files: magic, version, header
//! fields, header CRC32, payload words, payload CRC32.

use crate::error::{Error, Result};

pub(crate) const VERSION: u16 = 1;

pub(crate) struct Writer {
    buf: Vec<u8>,
    header_end: usize,
}

impl Writer {
    pub fn new(magic: &[u8; 4]) -> Self {
        let mut buf = Vec::with_capacity(256);
        buf.extend_from_slice(magic);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        Writer { buf, header_end: 0 }
    }

    pub fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn end_header(&mut self) {
        let crc = crc32fast::hash(&self.buf);
        self.u32(crc);
        self.header_end = self.buf.len();
    }

    pub fn finish(mut self) -> Vec<u8> {
        let crc = crc32fast::hash(&self.buf[self.header_end..]);
        self.u32(crc);
        self.buf
    }
}

pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
    mark: usize,
}

impl<'a> Reader<'a> {
    /// Checks magic and version.
    pub fn open(buf: &'a [u8], magic: &[u8; 4]) -> Result<Self> {
        if buf.len() < 4 {
            return Err(Error::Truncated);
        }
        let got: [u8; 4] = buf[..4].try_into().unwrap();
        if &got != magic {
            return Err(Error::BadMagic(got));
        }
        let mut r = Reader { buf, pos: 4, mark: 0 };
        let version = r.u16()?;
        if version != VERSION {
            return Err(Error::Version(version));
        }
        Ok(r)
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).ok_or(Error::Truncated)?;
        let s = self.buf.get(self.pos..end).ok_or(Error::Truncated)?;
        self.pos = end;
        Ok(s)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn bytes(&mut self, n: usize) -> Result<&'a [u8]> {
        self.take(n)
    }

    pub fn check_header(&mut self) -> Result<()> {
        let crc = crc32fast::hash(&self.buf[..self.pos]);
        if self.u32()? != crc {
            return Err(Error::Checksum("header"));
        }
        self.mark = self.pos;
        Ok(())
    }

    /// Reads `n` payload words, refusing counts the stream cannot hold.
    pub fn words(&mut self, n: u64) -> Result<Vec<u64>> {
        let bytes = n.checked_mul(8).ok_or(Error::Truncated)?;
        if bytes > (self.buf.len() - self.pos) as u64 {
            return Err(Error::Truncated);
        }
        let raw = self.take(bytes as usize)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    pub fn finish(mut self) -> Result<()> {
        let crc = crc32fast::hash(&self.buf[self.mark..self.pos]);
        if self.u32()? != crc {
            return Err(Error::Checksum("payload"));
        }
        if self.pos != self.buf.len() {
            return Err(Error::Malformed(format!(
                "{} trailing bytes",
                self.buf.len() - self.pos
            )));
        }
        Ok(())
    }
}
