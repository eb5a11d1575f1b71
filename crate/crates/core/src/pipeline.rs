//! End-to-end encryption and decryption.
//!
//! Per plane the forward stages are: linearize along the keyed scan path,
//! run-encode and pack (RLE mode only), block-scramble, OMFLIP. The streams
//! are then emitted in the key's plane order. Decryption runs the same
//! stages backwards and fails loudly on any structural inconsistency.

use crate::bitplane::{compose, decompose, BitPlane, PLANE_COUNT};
use crate::error::{Error, Result};
use crate::image_io::{check_dimensions, CipherContainer, GrayImage};
use crate::keyschedule::{ImageKey, PlaneKey, PlaneMode};
use crate::permnet::{omflip_apply, omflip_invert};
use crate::rle2d::{decode_runs, encode_runs, pack_runs, unpack_runs, RunsEncoding};
use crate::scanpath::{delinearize, generate_path, linearize};
use crate::scramble::{scramble, unscramble};

/// Every intermediate stream of one plane's encryption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneTrace {
    pub level: u8,
    pub linearized: Vec<bool>,
    /// Input to the scrambler: packed runs, or the linearized bits in RAW mode.
    pub packed: Vec<bool>,
    pub scrambled: Vec<bool>,
    pub omflipped: Vec<bool>,
}

pub fn encrypt_plane(plane: &BitPlane, pk: &PlaneKey) -> Result<PlaneTrace> {
    pk.validate_for_area(plane.area())?;
    let path = generate_path(pk.scan_pattern_id, plane.width, plane.height)?;
    let linearized = linearize(plane, &path)?;
    let packed = match pk.mode {
        PlaneMode::Raw => linearized.clone(),
        PlaneMode::Rle => {
            let enc = encode_runs(&linearized)?;
            if enc.first_bit != pk.first_bit
                || enc.runs.len() != pk.run_count as usize
                || enc.field_width != pk.field_width
            {
                return Err(Error::InvalidKey(format!(
                    "plane b{}: key run parameters (first {}, count {}, width {}) do not match \
                     the image (first {}, count {}, width {})",
                    pk.level,
                    pk.first_bit as u8,
                    pk.run_count,
                    pk.field_width,
                    enc.first_bit as u8,
                    enc.runs.len(),
                    enc.field_width
                )));
            }
            pack_runs(&enc)?
        }
    };
    let scrambled = scramble(&packed, &pk.scramble_params())?;
    let omflipped = omflip_apply(&scrambled, &pk.control_bits)?;
    Ok(PlaneTrace {
        level: pk.level,
        linearized,
        packed,
        scrambled,
        omflipped,
    })
}

/// Traces for all eight planes, indexed by level.
pub fn trace_image(img: &GrayImage, key: &ImageKey) -> Result<Vec<PlaneTrace>> {
    key.validate()?;
    decompose(img)
        .iter()
        .zip(&key.plane_keys)
        .map(|(plane, pk)| encrypt_plane(plane, pk))
        .collect()
}

pub fn encrypt(img: &GrayImage, key: &ImageKey) -> Result<CipherContainer> {
    let traces = trace_image(img, key)?;
    let planes = key
        .plane_order
        .iter()
        .map(|&level| traces[level as usize].omflipped.clone())
        .collect();
    Ok(CipherContainer {
        width: img.width(),
        height: img.height(),
        planes,
    })
}

pub fn decrypt_plane(
    stream: &[bool],
    pk: &PlaneKey,
    width: usize,
    height: usize,
) -> Result<BitPlane> {
    let fail = |reason: String| Error::Decrypt {
        level: pk.level,
        reason,
    };
    let area = width * height;
    pk.validate_for_area(area)?;
    let payload_len = pk.payload_len(area);
    if stream.len() != payload_len + pk.pad_bits as usize {
        return Err(fail(format!(
            "stream has {} bits, key expects {}",
            stream.len(),
            payload_len + pk.pad_bits as usize
        )));
    }
    let scrambled = omflip_invert(stream, &pk.control_bits)?;
    let packed = unscramble(&scrambled, &pk.scramble_params()).map_err(|e| fail(e.to_string()))?;
    let linearized = match pk.mode {
        PlaneMode::Raw => packed,
        PlaneMode::Rle => {
            let runs = unpack_runs(&packed, pk.field_width, pk.run_count as usize)
                .map_err(|e| fail(e.to_string()))?;
            let total: u64 = runs.iter().map(|&r| r as u64).sum();
            if total != area as u64 {
                return Err(fail(format!("runs sum to {total}, plane has {area} cells")));
            }
            decode_runs(&RunsEncoding::from_runs(pk.first_bit, runs))?
        }
    };
    let path = generate_path(pk.scan_pattern_id, width, height)?;
    delinearize(&linearized, &path, pk.level)
}

pub fn decrypt(container: &CipherContainer, key: &ImageKey) -> Result<GrayImage> {
    key.validate()?;
    check_dimensions(container.width, container.height)?;
    if container.planes.len() != PLANE_COUNT {
        return Err(Error::PlaneCount(container.planes.len()));
    }
    let planes = key
        .plane_order
        .iter()
        .zip(&container.planes)
        .map(|(&level, stream)| {
            decrypt_plane(
                stream,
                &key.plane_keys[level as usize],
                container.width,
                container.height,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    compose(&planes)
}
