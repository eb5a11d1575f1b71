//! Key material: generation from an image and master seed, plus the binary
//! key file.
//!
//! Key file layout (integers big-endian):
//!
//! ```text
//! "OMFK1" | version 0x01 | master_seed u64 | plane_order [u8; 8]
//! 8 x { level u8 | scan_pattern_id u8 | mode u8 | first_bit u8 | run_count u32
//!       | field_width u8 | block_size u8 | pad_bits u8 | scramble_seed u64
//!       | control_len u16 | control bits, MSB-first, ceil(control_len/8) bytes }
//! ```
//!
//! Plane records are stored in level order b0..b7.

use crate::bitplane::{decompose, PLANE_COUNT};
use crate::bits::{pack_msb_first, unpack_msb_first};
use crate::error::{Error, Result};
use crate::image_io::{ByteReader, GrayImage};
use crate::permnet::{fixed_points, ControlBits};
use crate::rle2d::{encode_runs, pack_runs};
use crate::scanpath::{linearize, select_optimal_path, PATTERN_COUNT};
use crate::scramble::{choose_block_size, Prng, ScrambleParams, MAX_BLOCK, MIN_BLOCK};

pub const KEY_MAGIC: &[u8; 5] = b"OMFK1";
pub const KEY_VERSION: u8 = 0x01;
/// Control vector length produced by [`keygen`].
pub const CONTROL_LEN: usize = 512;
/// Planes of at least this many cells must carry at least
/// [`MIN_CONTROL_LEN`] control bits.
pub const LARGE_PLANE_AREA: usize = 64 * 64;
pub const MIN_CONTROL_LEN: usize = 300;
/// Candidate control vectors drawn per plane by [`keygen`].
pub const CONTROL_CANDIDATES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneMode {
    /// Packed run lengths are scrambled.
    Rle = 0,
    /// Run coding would not shrink the plane; linearized bits are scrambled as is.
    Raw = 1,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneKey {
    pub level: u8,
    pub scan_pattern_id: u8,
    pub mode: PlaneMode,
    pub first_bit: bool,
    pub run_count: u32,
    pub field_width: u8,
    pub block_size: u8,
    pub pad_bits: u8,
    pub scramble_seed: u64,
    pub control_bits: ControlBits,
}

impl PlaneKey {
    pub fn scramble_params(&self) -> ScrambleParams {
        ScrambleParams {
            block_size: self.block_size as usize,
            seed: self.scramble_seed,
            pad_bits: self.pad_bits as usize,
        }
    }

    /// Bits entering the scrambler, before padding.
    pub fn payload_len(&self, plane_area: usize) -> usize {
        match self.mode {
            PlaneMode::Rle => self.run_count as usize * self.field_width as usize,
            PlaneMode::Raw => plane_area,
        }
    }

    fn validate(&self, expected_level: u8) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidKey(format!("plane b{expected_level}: {msg}")));
        if self.level != expected_level {
            return bad(format!("record carries level {}", self.level));
        }
        if self.scan_pattern_id >= PATTERN_COUNT {
            return bad(format!("scan pattern {}", self.scan_pattern_id));
        }
        match self.mode {
            PlaneMode::Raw if self.first_bit || self.run_count != 0 || self.field_width != 0 => {
                return bad("RAW plane with nonzero run fields".into())
            }
            PlaneMode::Rle if self.run_count == 0 || !(1..=32).contains(&self.field_width) => {
                return bad("RLE plane with empty run fields".into())
            }
            _ => {}
        }
        if !(MIN_BLOCK..=MAX_BLOCK).contains(&(self.block_size as usize)) {
            return bad(format!("block size {}", self.block_size));
        }
        if self.pad_bits > 2 {
            return bad(format!("pad bits {}", self.pad_bits));
        }
        if self.control_bits.is_empty() {
            return bad("empty control vector".into());
        }
        Ok(())
    }

    /// Checks the record against the plane size it is used on.
    pub(crate) fn validate_for_area(&self, area: usize) -> Result<()> {
        self.validate(self.level)?;
        if area >= LARGE_PLANE_AREA && self.control_bits.len() < MIN_CONTROL_LEN {
            return Err(Error::InvalidKey(format!(
                "plane b{}: {} control bits, need at least {MIN_CONTROL_LEN}",
                self.level,
                self.control_bits.len()
            )));
        }
        let len = self.payload_len(area);
        if !(len + self.pad_bits as usize).is_multiple_of(self.block_size as usize) {
            return Err(Error::InvalidKey(format!(
                "plane b{}: block size {} does not divide {len}+{}",
                self.level, self.block_size, self.pad_bits
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageKey {
    pub master_seed: u64,
    /// `plane_order[t]` is the level sent t-th.
    pub plane_order: [u8; PLANE_COUNT],
    /// Indexed by level.
    pub plane_keys: Vec<PlaneKey>,
}

impl ImageKey {
    pub fn validate(&self) -> Result<()> {
        let mut seen = [false; PLANE_COUNT];
        for &l in &self.plane_order {
            match seen.get_mut(l as usize) {
                Some(s) if !*s => *s = true,
                _ => {
                    return Err(Error::InvalidKey(format!(
                        "plane order {:?} is not a permutation of 0..8",
                        self.plane_order
                    )))
                }
            }
        }
        if self.plane_keys.len() != PLANE_COUNT {
            return Err(Error::InvalidKey(format!(
                "{} plane records",
                self.plane_keys.len()
            )));
        }
        for (level, pk) in self.plane_keys.iter().enumerate() {
            pk.validate(level as u8)?;
        }
        Ok(())
    }
}

fn control_bits_from(prng: &mut Prng, len: usize) -> ControlBits {
    let mut bits = Vec::with_capacity(len);
    while bits.len() < len {
        let word = prng.next_u64();
        bits.extend(
            (0..64)
                .rev()
                .map(|s| (word >> s) & 1 == 1)
                .take(len - bits.len()),
        );
    }
    ControlBits(bits)
}

/// Draws control vectors from `prng` until one moves all but at most 1/16
/// of a `stream_len`-bit stream. Omega and flip cancel pairwise, so a chain
/// whose net omega power is a multiple of the stage order leaves the stream
/// (nearly) in place; such vectors are skipped. After
/// [`CONTROL_CANDIDATES`] draws the one with the fewest fixed points wins.
fn draw_control_bits(prng: &mut Prng, stream_len: usize) -> Result<ControlBits> {
    let mut best: Option<(usize, ControlBits)> = None;
    for _ in 0..CONTROL_CANDIDATES {
        let ctrl = control_bits_from(prng, CONTROL_LEN);
        let fixed = fixed_points(stream_len, &ctrl)?;
        if fixed * 16 <= stream_len {
            return Ok(ctrl);
        }
        if best.as_ref().is_none_or(|(f, _)| fixed < *f) {
            best = Some((fixed, ctrl));
        }
    }
    Ok(best.expect("at least one candidate").1)
}

/// Derives the full key for `img`.
///
/// The master stream yields one seed per level (draws 0..8), then the plane
/// order by Fisher-Yates. Each level's stream yields its scramble seed
/// followed by the control words.
pub fn keygen(img: &GrayImage, master_seed: u64) -> Result<ImageKey> {
    let mut master = Prng::new(master_seed);
    let level_seeds: Vec<u64> = (0..PLANE_COUNT).map(|_| master.next_u64()).collect();
    let mut plane_order: [u8; PLANE_COUNT] = std::array::from_fn(|i| i as u8);
    for i in (1..PLANE_COUNT).rev() {
        let j = master.below(i as u64 + 1) as usize;
        plane_order.swap(i, j);
    }

    let mut plane_keys = Vec::with_capacity(PLANE_COUNT);
    for (plane, &level_seed) in decompose(img).iter().zip(&level_seeds) {
        let (path, _) = select_optimal_path(plane)?;
        let enc = encode_runs(&linearize(plane, &path)?)?;
        let packed_len = pack_runs(&enc)?.len();
        let (mode, first_bit, run_count, field_width, payload_len) = if packed_len < plane.area() {
            (
                PlaneMode::Rle,
                enc.first_bit,
                enc.runs.len() as u32,
                enc.field_width,
                packed_len,
            )
        } else {
            (PlaneMode::Raw, false, 0, 0, plane.area())
        };
        let (block_size, pad_bits) = choose_block_size(payload_len);
        let mut prng = Prng::new(level_seed);
        let scramble_seed = prng.next_u64();
        let control_bits = draw_control_bits(&mut prng, payload_len + pad_bits)?;
        plane_keys.push(PlaneKey {
            level: plane.level,
            scan_pattern_id: path.pattern_id,
            mode,
            first_bit,
            run_count,
            field_width,
            block_size: block_size as u8,
            pad_bits: pad_bits as u8,
            scramble_seed,
            control_bits,
        });
    }
    Ok(ImageKey {
        master_seed,
        plane_order,
        plane_keys,
    })
}

pub fn serialize_key(key: &ImageKey) -> Result<Vec<u8>> {
    key.validate()?;
    let mut out = Vec::new();
    out.extend_from_slice(KEY_MAGIC);
    out.push(KEY_VERSION);
    out.extend_from_slice(&key.master_seed.to_be_bytes());
    out.extend_from_slice(&key.plane_order);
    for pk in &key.plane_keys {
        let ctrl_len = u16::try_from(pk.control_bits.len()).map_err(|_| {
            Error::InvalidKey(format!("{} control bits exceed u16", pk.control_bits.len()))
        })?;
        out.extend_from_slice(&[
            pk.level,
            pk.scan_pattern_id,
            pk.mode as u8,
            pk.first_bit as u8,
        ]);
        out.extend_from_slice(&pk.run_count.to_be_bytes());
        out.extend_from_slice(&[pk.field_width, pk.block_size, pk.pad_bits]);
        out.extend_from_slice(&pk.scramble_seed.to_be_bytes());
        out.extend_from_slice(&ctrl_len.to_be_bytes());
        out.extend_from_slice(&pack_msb_first(&pk.control_bits.0));
    }
    Ok(out)
}

pub fn parse_key(bytes: &[u8]) -> Result<ImageKey> {
    let mut rd = ByteReader::new(bytes);
    if rd.take(5, "key magic")? != KEY_MAGIC {
        return Err(Error::BadMagic { expected: "OMFK1" });
    }
    let version = rd.u8("key version")?;
    if version != KEY_VERSION {
        return Err(Error::InvalidKey(format!(
            "unsupported version {version:#04x}"
        )));
    }
    let master_seed = rd.u64("key header")?;
    let plane_order: [u8; PLANE_COUNT] = rd.take(PLANE_COUNT, "plane order")?.try_into().unwrap();
    let mut plane_keys = Vec::with_capacity(PLANE_COUNT);
    for _ in 0..PLANE_COUNT {
        let level = rd.u8("plane record")?;
        let scan_pattern_id = rd.u8("plane record")?;
        let mode = match rd.u8("plane record")? {
            0 => PlaneMode::Rle,
            1 => PlaneMode::Raw,
            m => return Err(Error::InvalidKey(format!("plane b{level}: mode {m}"))),
        };
        let first_bit = match rd.u8("plane record")? {
            0 => false,
            1 => true,
            v => return Err(Error::InvalidKey(format!("plane b{level}: first bit {v}"))),
        };
        let run_count = rd.u32("plane record")?;
        let field_width = rd.u8("plane record")?;
        let block_size = rd.u8("plane record")?;
        let pad_bits = rd.u8("plane record")?;
        let scramble_seed = rd.u64("plane record")?;
        let ctrl_len = rd.u16("plane record")? as usize;
        let packed = rd.take(ctrl_len.div_ceil(8), "control bits")?;
        let ctrl =
            unpack_msb_first(packed, ctrl_len).ok_or(Error::NonZeroPadding("control bits"))?;
        plane_keys.push(PlaneKey {
            level,
            scan_pattern_id,
            mode,
            first_bit,
            run_count,
            field_width,
            block_size,
            pad_bits,
            scramble_seed,
            control_bits: ControlBits(ctrl),
        });
    }
    if !rd.is_empty() {
        return Err(Error::InvalidKey(
            "trailing bytes after plane records".into(),
        ));
    }
    let key = ImageKey {
        master_seed,
        plane_order,
        plane_keys,
    };
    key.validate()?;
    Ok(key)
}
