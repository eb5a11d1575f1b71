//! Bit-plane decomposition of an 8-bit image and weighted recomposition.

use crate::error::{Error, Result};
use crate::image_io::GrayImage;

pub const PLANE_COUNT: usize = 8;

/// One binary plane of a gray image. `level` 0 is the least significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitPlane {
    pub level: u8,
    pub width: usize,
    pub height: usize,
    /// Row-major.
    pub bits: Vec<bool>,
}

impl BitPlane {
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }
}

/// Splits `img` into planes b0..b7.
pub fn decompose(img: &GrayImage) -> Vec<BitPlane> {
    (0..PLANE_COUNT as u8)
        .map(|level| BitPlane {
            level,
            width: img.width(),
            height: img.height(),
            bits: img
                .pixels()
                .iter()
                .map(|&p| (p >> level) & 1 == 1)
                .collect(),
        })
        .collect()
}

/// Rebuilds the image as the sum of planes weighted by 2^level. The planes
/// may arrive in any order but every level must appear exactly once.
pub fn compose(planes: &[BitPlane]) -> Result<GrayImage> {
    if planes.len() != PLANE_COUNT {
        return Err(Error::PlaneCount(planes.len()));
    }
    let (width, height) = (planes[0].width, planes[0].height);
    let mut seen = [false; PLANE_COUNT];
    for p in planes {
        if p.width != width || p.height != height || p.bits.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "plane b{} is {}x{} ({} bits), expected {width}x{height}",
                p.level,
                p.width,
                p.height,
                p.bits.len()
            )));
        }
        let slot = seen
            .get_mut(p.level as usize)
            .ok_or(Error::PlaneLevel(p.level))?;
        if *slot {
            return Err(Error::PlaneLevel(p.level));
        }
        *slot = true;
    }
    let mut pixels = vec![0u8; width * height];
    for p in planes {
        for (px, &bit) in pixels.iter_mut().zip(&p.bits) {
            *px |= (bit as u8) << p.level;
        }
    }
    GrayImage::new(width, height, pixels)
}
