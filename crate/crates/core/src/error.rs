use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bit position {pos} out of range for segment {segment} of {bits} bits")]
    OutOfBounds { segment: usize, pos: u64, bits: u64 },

    #[error("segment {0} does not exist")]
    NoSuchSegment(usize),

    #[error("word width {0} is not a power of two in 1..=64")]
    InvalidWidth(u32),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("advisor: {0}")]
    Advisor(String),

    #[error("workload generation failed: {0}")]
    Generation(String),

    #[error("bad magic {0:?}")]
    BadMagic([u8; 4]),

    #[error("unsupported format version {0}")]
    Version(u16),

    #[error("stream truncated")]
    Truncated,

    #[error("{0} checksum mismatch")]
    Checksum(&'static str),

    #[error("malformed stream: {0}")]
    Malformed(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
