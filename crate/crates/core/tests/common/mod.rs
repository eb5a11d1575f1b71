#![allow(dead_code)]

use omflip_crypt::permnet::{flip_stage, omega_stage, ControlBits};
use omflip_crypt::scramble::Prng;
use omflip_crypt::{read_pgm, GrayImage};

pub const NATURAL: [&str; 3] = ["cameraman", "astronaut", "chelsea"];

pub fn natural_images() -> Vec<(String, GrayImage)> {
    NATURAL
        .iter()
        .map(|name| {
            let path = format!("{}/tests/data/{name}.pgm", env!("CARGO_MANIFEST_DIR"));
            let img = read_pgm(&std::fs::read(&path).unwrap()).unwrap();
            (name.to_string(), img)
        })
        .collect()
}

pub fn random_bits(prng: &mut Prng, len: usize) -> Vec<bool> {
    (0..len).map(|_| prng.next_u64() & 1 == 1).collect()
}

/// Mix of uniform noise, smooth gradients and flat regions.
pub fn random_image(prng: &mut Prng, side: usize) -> GrayImage {
    let kind = prng.below(3);
    let base = prng.below(256) as usize;
    let px = (0..side * side)
        .map(|k| match kind {
            0 => prng.next_u64() as u8,
            1 => ((k / side + k % side) * 255 / (2 * side - 1) + base) as u8,
            _ => {
                if (k / side) < side / 2 {
                    base as u8
                } else {
                    (prng.below(4) as usize + base) as u8
                }
            }
        })
        .collect();
    GrayImage::new(side, side, px).unwrap()
}

pub fn control_from(v: &[u8]) -> ControlBits {
    ControlBits(v.iter().map(|&x| x == 1).collect())
}

/// One stage per control bit, exactly as the network is wired.
pub fn literal_chain<T: Copy>(bits: &[T], ctrl: &ControlBits) -> Vec<T> {
    ctrl.0.iter().fold(bits.to_vec(), |cur, &c| {
        if c {
            flip_stage(&cur).unwrap()
        } else {
            omega_stage(&cur).unwrap()
        }
    })
}
