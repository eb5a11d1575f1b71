//! Bit strings are `Vec<bool>` throughout; serialized forms are packed
//! most-significant bit first within each byte.

/// Packs bits MSB-first; trailing pad bits of the last byte are zero.
pub fn pack_msb_first(bits: &[bool]) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            out[i / 8] |= 0x80 >> (i % 8);
        }
    }
    out
}

/// Inverse of [`pack_msb_first`]. Returns `None` when any pad bit past
/// `bit_len` is set or `bytes` has the wrong length.
pub fn unpack_msb_first(bytes: &[u8], bit_len: usize) -> Option<Vec<bool>> {
    if bytes.len() != bit_len.div_ceil(8) {
        return None;
    }
    let bits: Vec<bool> = (0..bit_len)
        .map(|i| bytes[i / 8] & (0x80 >> (i % 8)) != 0)
        .collect();
    let used = bit_len % 8;
    if used != 0 {
        let pad_mask = 0xFFu8 >> used;
        if bytes[bytes.len() - 1] & pad_mask != 0 {
            return None;
        }
    }
    Some(bits)
}

pub fn popcount(bits: &[bool]) -> usize {
    bits.iter().filter(|&&b| b).count()
}

/// Writes `value` as a `width`-bit big-endian field.
pub(crate) fn push_field(out: &mut Vec<bool>, value: u64, width: u8) {
    for shift in (0..width).rev() {
        out.push((value >> shift) & 1 == 1);
    }
}

pub(crate) fn read_field(bits: &[bool]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}
