//! Cipher-stream statistics: binary entropy, stage-to-stage correlation
//! (OMFLIP and GRP), and control-bit sensitivity.

use std::fmt;

use crate::bitplane::PLANE_COUNT;
use crate::bits::popcount;
use crate::error::{Error, Result};
use crate::image_io::GrayImage;
use crate::keyschedule::ImageKey;
use crate::permnet::grp_permute;
use crate::pipeline::{decrypt, encrypt, trace_image};
use crate::scramble::Prng;

/// H(p) in bits, with p the fraction of ones and 0·log 0 = 0.
pub fn binary_entropy(bits: &[bool]) -> Result<f64> {
    if bits.is_empty() {
        return Err(Error::Empty);
    }
    let p = popcount(bits) as f64 / bits.len() as f64;
    Ok(entropy_of(p))
}

pub fn entropy_of(p: f64) -> f64 {
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * q.log2() };
    term(p) + term(1.0 - p)
}

/// Pearson correlation of two bit strings read as 0/1 values.
pub fn correlation(a: &[bool], b: &[bool]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(format!("{} vs {}", a.len(), b.len())));
    }
    if a.is_empty() {
        return Err(Error::Empty);
    }
    let n = a.len() as f64;
    let sa = popcount(a) as f64;
    let sb = popcount(b) as f64;
    let sab = a.iter().zip(b).filter(|(&x, &y)| x && y).count() as f64;
    // for 0/1 data the sum of squares equals the sum
    let var_a = n * sa - sa * sa;
    let var_b = n * sb - sb * sb;
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((n * sab - sa * sb) / (var_a.sqrt() * var_b.sqrt()))
}

/// Tweak separating the GRP comparison mask stream from the scrambler stream.
const GRP_MASK_TWEAK: u64 = 0x4752_505F_4D41_534B;

/// GRP control mask for one plane, drawn from the plane's scramble seed.
pub fn grp_mask(scramble_seed: u64, len: usize) -> Vec<bool> {
    let mut prng = Prng::new(scramble_seed ^ GRP_MASK_TWEAK);
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let word = prng.next_u64();
        out.extend(
            (0..64)
                .rev()
                .map(|s| (word >> s) & 1 == 1)
                .take(len - out.len()),
        );
    }
    out
}

/// Flips `flip_count` distinct control bits of plane `level`, decrypts the
/// unmodified ciphertext with the perturbed key and returns the fraction of
/// pixels that differ from `img`. A structural decryption failure counts
/// as a full mismatch.
pub fn key_sensitivity_probe(
    img: &GrayImage,
    key: &ImageKey,
    level: u8,
    flip_count: usize,
    rng: &mut Prng,
) -> Result<f64> {
    let container = encrypt(img, key)?;
    let mut perturbed = key.clone();
    let ctrl = &mut perturbed.plane_keys[level as usize].control_bits.0;
    let n = ctrl.len();
    if flip_count > n {
        return Err(Error::InvalidKey(format!(
            "cannot flip {flip_count} of {n} control bits"
        )));
    }
    // partial Fisher-Yates picks distinct positions
    let mut positions: Vec<usize> = (0..n).collect();
    for i in 0..flip_count {
        let j = i + rng.below((n - i) as u64) as usize;
        positions.swap(i, j);
        ctrl[positions[i]] = !ctrl[positions[i]];
    }
    Ok(match decrypt(&container, &perturbed) {
        Ok(out) => {
            let differing = out
                .pixels()
                .iter()
                .zip(img.pixels())
                .filter(|(a, b)| a != b)
                .count();
            differing as f64 / img.area() as f64
        }
        Err(_) => 1.0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneMetrics {
    pub level: u8,
    /// Entropy of the final (OMFLIP) cipher stream.
    pub entropy: f64,
    /// Scrambled vs OMFLIP output; `None` when either side is constant.
    pub corr_omflip: Option<f64>,
    /// Scrambled vs GRP output.
    pub corr_grp: Option<f64>,
    /// Mean pixel mismatch over the sensitivity trials with 3 flipped bits.
    pub sensitivity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub width: usize,
    pub height: usize,
    /// Indexed by level.
    pub planes: Vec<PlaneMetrics>,
    pub sensitivity_trials: usize,
}

pub const REPORT_FLIP_COUNT: usize = 3;
pub const REPORT_SENSITIVITY_TRIALS: usize = 10;

pub fn report(img: &GrayImage, key: &ImageKey) -> Result<Report> {
    let traces = trace_image(img, key)?;
    let mut rng = Prng::new(key.master_seed ^ 0x5E75_1717);
    let mut planes = Vec::with_capacity(PLANE_COUNT);
    for t in &traces {
        let pk = &key.plane_keys[t.level as usize];
        let grp = grp_permute(&t.scrambled, &grp_mask(pk.scramble_seed, t.scrambled.len()))?;
        let mut sensitivity = 0.0;
        for _ in 0..REPORT_SENSITIVITY_TRIALS {
            sensitivity += key_sensitivity_probe(img, key, t.level, REPORT_FLIP_COUNT, &mut rng)?;
        }
        planes.push(PlaneMetrics {
            level: t.level,
            entropy: binary_entropy(&t.omflipped)?,
            corr_omflip: correlation(&t.scrambled, &t.omflipped).ok(),
            corr_grp: correlation(&t.scrambled, &grp).ok(),
            sensitivity: sensitivity / REPORT_SENSITIVITY_TRIALS as f64,
        });
    }
    Ok(Report {
        width: img.width(),
        height: img.height(),
        planes,
        sensitivity_trials: REPORT_SENSITIVITY_TRIALS,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| format!("{x:.7}"))
}

impl Report {
    /// `metric,plane,stage,value` lines.
    pub fn machine_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in &self.planes {
            out.push(format!("entropy,b{},omflipped,{:.7}", p.level, p.entropy));
        }
        for p in &self.planes {
            out.push(format!(
                "correlation,b{},omflip,{}",
                p.level,
                fmt_opt(p.corr_omflip)
            ));
        }
        for p in &self.planes {
            out.push(format!(
                "correlation,b{},grp,{}",
                p.level,
                fmt_opt(p.corr_grp)
            ));
        }
        for p in &self.planes {
            out.push(format!(
                "key_sensitivity,b{},flip{REPORT_FLIP_COUNT},{:.7}",
                p.level, p.sensitivity
            ));
        }
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "image {}x{}", self.width, self.height)?;
        writeln!(
            f,
            "{:<6} {:>10} {:>14} {:>14} {:>12}",
            "plane", "entropy", "corr(OMFLIP)", "corr(GRP)", "mismatch@3"
        )?;
        for p in self.planes.iter().rev() {
            writeln!(
                f,
                "b{:<5} {:>10.4} {:>14} {:>14} {:>12.4}",
                p.level,
                p.entropy,
                fmt_opt(p.corr_omflip),
                fmt_opt(p.corr_grp),
                p.sensitivity
            )?;
        }
        write!(
            f,
            "mismatch@3: mean pixel mismatch over {} trials with {REPORT_FLIP_COUNT} flipped control bits",
            self.sensitivity_trials
        )
    }
}
