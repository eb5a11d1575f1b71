use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed PGM: {0}")]
    MalformedPgm(String),
    #[error("unsupported PGM maxval {0} (only 255 is supported)")]
    UnsupportedDepth(u32),
    #[error("invalid image dimensions {width}x{height}: must be square, power of two, 4..=512")]
    InvalidDimensions { width: usize, height: usize },
    #[error("truncated input: {0}")]
    Truncated(&'static str),
    #[error("bad magic: expected {expected:?}")]
    BadMagic { expected: &'static str },
    #[error("nonzero padding bits in {0}")]
    NonZeroPadding(&'static str),
    #[error("expected 8 bit planes, got {0}")]
    PlaneCount(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("bit plane level {0} is duplicated or missing")]
    PlaneLevel(u8),
    #[error("unknown scan pattern id {0}")]
    UnknownPattern(u8),
    #[error("Hilbert scan requires a power-of-two square, got {width}x{height}")]
    HilbertShape { width: usize, height: usize },
    #[error("empty input")]
    Empty,
    #[error("zero-length run decoded")]
    ZeroRun,
    #[error("run {run} does not fit in {width} bits")]
    RunOverflow { run: u32, width: u8 },
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("invalid scramble parameters: {0}")]
    ScrambleParams(String),
    #[error("permutation index {index} out of range for block size {block}")]
    PermutationIndex { block: usize, index: u64 },
    #[error("empty control-bit vector")]
    EmptyControl,
    #[error("invalid key: {0}")]
    InvalidKey(String),
    #[error("decryption failed on plane b{level}: {reason}")]
    Decrypt { level: u8, reason: String },
    #[error("correlation undefined: zero variance")]
    ZeroVariance,
}

pub type Result<T> = std::result::Result<T, Error>;
