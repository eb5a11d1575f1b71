//! Omega and flip network stages, the OMFLIP stage chain and GRP.
//!
//! For a `w`-bit input with `lim = ceil(w/2)` and 1-based indices, the omega
//! stage assigns `out(2i) = in(i)` and `out(2i+1) = in(i+lim)` for
//! `i = 1..=lim`, skipping targets or sources past `w`, then patches the
//! first output: `out(1) = in(w)` for even `w`, `out(1) = in(lim)` for odd
//! `w`. The flip stage is the mirror image and undoes omega exactly.
//!
//! A control vector selects one stage per bit: 0 = omega, 1 = flip.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ControlBits(pub Vec<bool>);

impl ControlBits {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Signed stage count: omega stages minus flip stages.
    pub fn net_omega_power(&self) -> i64 {
        self.0.iter().map(|&c| if c { -1 } else { 1 }).sum()
    }
}

/// Source index (0-based) for every output position of the omega stage.
pub fn omega_sources(w: usize) -> Result<Vec<usize>> {
    if w < 2 {
        return Err(Error::LengthMismatch(format!(
            "network stage needs w >= 2, got {w}"
        )));
    }
    let lim = w.div_ceil(2);
    let mut src = vec![usize::MAX; w];
    // 1-based i, shifted to 0-based indices on assignment
    for i in 1..=lim {
        if 2 * i <= w {
            src[2 * i - 1] = i - 1;
        }
        if 2 * i < w && i + lim <= w {
            src[2 * i] = i + lim - 1;
        }
    }
    src[0] = if w.is_multiple_of(2) { w - 1 } else { lim - 1 };
    debug_assert!(src.iter().all(|&s| s < w));
    Ok(src)
}

/// Source index (0-based) for every output position of the flip stage.
pub fn flip_sources(w: usize) -> Result<Vec<usize>> {
    if w < 2 {
        return Err(Error::LengthMismatch(format!(
            "network stage needs w >= 2, got {w}"
        )));
    }
    let lim = w.div_ceil(2);
    let mut src = vec![usize::MAX; w];
    for i in 1..=lim {
        if 2 * i <= w {
            src[i - 1] = 2 * i - 1;
        }
        if 2 * i < w && i + lim <= w {
            src[i + lim - 1] = 2 * i;
        }
    }
    if w.is_multiple_of(2) {
        src[2 * lim - 1] = 0;
    } else {
        src[lim - 1] = 0;
    }
    debug_assert!(src.iter().all(|&s| s < w));
    Ok(src)
}

fn gather<T: Copy>(bits: &[T], src: &[usize]) -> Vec<T> {
    src.iter().map(|&s| bits[s]).collect()
}

pub fn omega_stage<T: Copy>(bits: &[T]) -> Result<Vec<T>> {
    Ok(gather(bits, &omega_sources(bits.len())?))
}

pub fn flip_stage<T: Copy>(bits: &[T]) -> Result<Vec<T>> {
    Ok(gather(bits, &flip_sources(bits.len())?))
}

/// Applies omega `power` times (flip `-power` times when negative).
fn apply_power<T: Copy>(bits: &[T], power: i64) -> Result<Vec<T>> {
    let src = if power >= 0 {
        omega_sources(bits.len())?
    } else {
        flip_sources(bits.len())?
    };
    let mut cur = bits.to_vec();
    let mut next = Vec::with_capacity(cur.len());
    for _ in 0..power.unsigned_abs() {
        next.clear();
        next.extend(src.iter().map(|&s| cur[s]));
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(cur)
}

/// Runs the stage chain selected by `ctrl`, left to right.
///
/// Flip is the exact inverse of omega, so adjacent omega/flip pairs cancel
/// and the chain equals omega raised to its net stage count.
pub fn omflip_apply<T: Copy>(bits: &[T], ctrl: &ControlBits) -> Result<Vec<T>> {
    if ctrl.is_empty() {
        return Err(Error::EmptyControl);
    }
    apply_power(bits, ctrl.net_omega_power())
}

/// Undoes [`omflip_apply`]: complemented stages in reverse order.
pub fn omflip_invert<T: Copy>(bits: &[T], ctrl: &ControlBits) -> Result<Vec<T>> {
    if ctrl.is_empty() {
        return Err(Error::EmptyControl);
    }
    apply_power(bits, -ctrl.net_omega_power())
}

/// Number of positions a `w`-bit stream keeps under the chain `ctrl`.
pub fn fixed_points(w: usize, ctrl: &ControlBits) -> Result<usize> {
    let idx: Vec<usize> = (0..w).collect();
    let moved = omflip_apply(&idx, ctrl)?;
    Ok(moved.iter().enumerate().filter(|&(i, &s)| i == s).count())
}

/// Stable two-way gather: bits under a 0 mask bit first, then bits under a 1.
pub fn grp_permute<T: Copy>(bits: &[T], mask: &[bool]) -> Result<Vec<T>> {
    if bits.len() != mask.len() {
        return Err(Error::LengthMismatch(format!(
            "GRP input {} vs mask {}",
            bits.len(),
            mask.len()
        )));
    }
    let zeros = bits.iter().zip(mask).filter(|(_, &m)| !m).map(|(&b, _)| b);
    let ones = bits.iter().zip(mask).filter(|(_, &m)| m).map(|(&b, _)| b);
    Ok(zeros.chain(ones).collect())
}
