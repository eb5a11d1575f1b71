//! Run encoding of a linearized plane and fixed-width packing of the runs.
//!
//! Runs are stored as their plain value (1..=max_run) in `field_width`
//! bits, big-endian, where `field_width` is the bit length of `max_run`.

use crate::bitplane::BitPlane;
use crate::bits::{push_field, read_field};
use crate::error::{Error, Result};
use crate::scanpath::{linearize, ScanPath};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunsEncoding {
    pub first_bit: bool,
    pub runs: Vec<u32>,
    pub max_run: u32,
    pub field_width: u8,
}

/// Minimum number of bits able to hold `max_run`: ceil(log2(max_run + 1)).
pub fn field_width_for(max_run: u32) -> u8 {
    (u32::BITS - max_run.leading_zeros()) as u8
}

pub fn encode_runs(bits: &[bool]) -> Result<RunsEncoding> {
    let (&first, rest) = bits.split_first().ok_or(Error::Empty)?;
    let mut runs = Vec::new();
    let mut current = first;
    let mut len = 1u32;
    for &b in rest {
        if b == current {
            len += 1;
        } else {
            runs.push(len);
            current = b;
            len = 1;
        }
    }
    runs.push(len);
    let max_run = *runs.iter().max().unwrap();
    Ok(RunsEncoding {
        first_bit: first,
        runs,
        max_run,
        field_width: field_width_for(max_run),
    })
}

impl RunsEncoding {
    /// Rebuilds the encoding record for runs recovered on the decrypt side.
    pub fn from_runs(first_bit: bool, runs: Vec<u32>) -> Self {
        let max_run = runs.iter().copied().max().unwrap_or(0);
        Self {
            first_bit,
            runs,
            max_run,
            field_width: field_width_for(max_run),
        }
    }
}

/// Expands runs back into bits, alternating from `first_bit`.
pub fn decode_runs(enc: &RunsEncoding) -> Result<Vec<bool>> {
    let total: usize = enc.runs.iter().map(|&r| r as usize).sum();
    let mut out = Vec::with_capacity(total);
    let mut bit = enc.first_bit;
    for &r in &enc.runs {
        if r == 0 {
            return Err(Error::ZeroRun);
        }
        out.extend(std::iter::repeat_n(bit, r as usize));
        bit = !bit;
    }
    Ok(out)
}

pub fn pack_runs(enc: &RunsEncoding) -> Result<Vec<bool>> {
    let w = enc.field_width;
    let mut out = Vec::with_capacity(enc.runs.len() * w as usize);
    for &run in &enc.runs {
        if w < 32 && run >> w != 0 {
            return Err(Error::RunOverflow { run, width: w });
        }
        push_field(&mut out, run as u64, w);
    }
    Ok(out)
}

pub fn unpack_runs(bits: &[bool], field_width: u8, run_count: usize) -> Result<Vec<u32>> {
    if field_width == 0 || field_width > 32 {
        return Err(Error::LengthMismatch(format!("field width {field_width}")));
    }
    let w = field_width as usize;
    if bits.len() != run_count * w {
        return Err(Error::LengthMismatch(format!(
            "{} packed bits for {run_count} runs of {w} bits",
            bits.len()
        )));
    }
    bits.chunks_exact(w)
        .map(|field| match read_field(field) as u32 {
            0 => Err(Error::ZeroRun),
            r => Ok(r),
        })
        .collect()
}

/// Encoded size in bits of `plane` along `path`: packed runs plus the
/// recorded first bit.
pub fn encoded_bit_count(plane: &BitPlane, path: &ScanPath) -> Result<usize> {
    let bits = linearize(plane, path)?;
    let enc = encode_runs(&bits)?;
    Ok(enc.runs.len() * enc.field_width as usize + 1)
}
