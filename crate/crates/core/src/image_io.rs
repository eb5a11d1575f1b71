//! 8-bit grayscale rasters, binary PGM (P5) I/O and the ciphertext container.
//!
//! Container layout (all integers big-endian):
//!
//! ```text
//! "OMFC1" | width: u32 | height: u32 | 8 x { bit_length: u32 | payload }
//! ```
//!
//! Each payload is `ceil(bit_length / 8)` bytes, packed MSB-first with zero
//! padding. Records appear in transmission order and carry no plane label.

use crate::bits::{pack_msb_first, unpack_msb_first};
use crate::error::{Error, Result};

pub const CONTAINER_MAGIC: &[u8; 5] = b"OMFC1";
pub const MIN_SIDE: usize = 4;
pub const MAX_SIDE: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Builds an image from row-major pixels. Dimensions must be a square
    /// power of two between 4 and 512.
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        check_dimensions(width, height)?;
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }
}

pub fn check_dimensions(width: usize, height: usize) -> Result<()> {
    if width != height || !width.is_power_of_two() || !(MIN_SIDE..=MAX_SIDE).contains(&width) {
        return Err(Error::InvalidDimensions { width, height });
    }
    Ok(())
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&c) = self.bytes.get(self.pos) {
            if c == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedPgm(format!("missing {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedPgm(format!("{what} out of range")))
    }
}

pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::MalformedPgm("expected P5 magic".into()));
    }
    let mut cur = HeaderCursor { bytes, pos: 2 };
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    // exactly one whitespace byte separates the header from the raster
    if !cur.bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::MalformedPgm(
            "missing whitespace after maxval".into(),
        ));
    }
    cur.pos += 1;
    if maxval != 255 {
        return Err(Error::UnsupportedDepth(maxval));
    }
    check_dimensions(width, height)?;
    let need = width * height;
    let raster = &bytes[cur.pos..];
    if raster.len() < need {
        return Err(Error::Truncated("PGM raster"));
    }
    GrayImage::new(width, height, raster[..need].to_vec())
}

pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

/// Parsed ciphertext: dimensions plus the 8 cipher streams in transmission order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherContainer {
    pub width: usize,
    pub height: usize,
    pub planes: Vec<Vec<bool>>,
}

pub fn write_container(planes: &[Vec<bool>], width: usize, height: usize) -> Result<Vec<u8>> {
    if planes.len() != 8 {
        return Err(Error::PlaneCount(planes.len()));
    }
    let mut out = Vec::new();
    out.extend_from_slice(CONTAINER_MAGIC);
    out.extend_from_slice(&u32_field(width, "width")?.to_be_bytes());
    out.extend_from_slice(&u32_field(height, "height")?.to_be_bytes());
    for plane in planes {
        out.extend_from_slice(&u32_field(plane.len(), "bit length")?.to_be_bytes());
        out.extend_from_slice(&pack_msb_first(plane));
    }
    Ok(out)
}

impl CipherContainer {
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        write_container(&self.planes, self.width, self.height)
    }
}

fn u32_field(value: usize, what: &str) -> Result<u32> {
    u32::try_from(value).map_err(|_| Error::LengthMismatch(format!("{what} {value} exceeds u32")))
}

pub fn parse_container(bytes: &[u8]) -> Result<CipherContainer> {
    let mut rd = ByteReader::new(bytes);
    if rd.take(5, "container magic")? != CONTAINER_MAGIC {
        return Err(Error::BadMagic { expected: "OMFC1" });
    }
    let width = rd.u32("container header")? as usize;
    let height = rd.u32("container header")? as usize;
    let mut planes = Vec::with_capacity(8);
    for _ in 0..8 {
        if rd.is_empty() {
            return Err(Error::PlaneCount(planes.len()));
        }
        let bit_len = rd.u32("plane record")? as usize;
        let payload = rd.take(bit_len.div_ceil(8), "plane payload")?;
        let bits =
            unpack_msb_first(payload, bit_len).ok_or(Error::NonZeroPadding("container payload"))?;
        planes.push(bits);
    }
    if !rd.is_empty() {
        return Err(Error::LengthMismatch(
            "trailing bytes after 8 plane records".into(),
        ));
    }
    Ok(CipherContainer {
        width,
        height,
        planes,
    })
}

/// Big-endian cursor shared by the container and key parsers.
pub(crate) struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub(crate) fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub(crate) fn take(&mut self, n: usize, what: &'static str) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).ok_or(Error::Truncated(what))?;
        let slice = self
            .bytes
            .get(self.pos..end)
            .ok_or(Error::Truncated(what))?;
        self.pos = end;
        Ok(slice)
    }

    pub(crate) fn u8(&mut self, what: &'static str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    pub(crate) fn u16(&mut self, what: &'static str) -> Result<u16> {
        Ok(u16::from_be_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    pub(crate) fn u32(&mut self, what: &'static str) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    pub(crate) fn u64(&mut self, what: &'static str) -> Result<u64> {
        Ok(u64::from_be_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.pos >= self.bytes.len()
    }
}
