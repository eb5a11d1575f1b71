//! Keyed block scrambling of the compressed bit string.
//!
//! The string is zero-padded to a multiple of the block size `x`, and each
//! block is permuted by one of the `x!` lexicographically indexed patterns.
//! Pattern indices are drawn per block from a SplitMix64 stream.

use crate::error::{Error, Result};

pub const MIN_BLOCK: usize = 3;
pub const MAX_BLOCK: usize = 8;

/// SplitMix64.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prng {
    state: u64,
}

impl Prng {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw in `0..bound` by modulo reduction.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScrambleParams {
    pub block_size: usize,
    pub seed: u64,
    pub pad_bits: usize,
}

impl ScrambleParams {
    fn check(&self, unpadded_len: usize) -> Result<()> {
        if !(MIN_BLOCK..=MAX_BLOCK).contains(&self.block_size) {
            return Err(Error::ScrambleParams(format!(
                "block size {} outside {MIN_BLOCK}..={MAX_BLOCK}",
                self.block_size
            )));
        }
        if !(unpadded_len + self.pad_bits).is_multiple_of(self.block_size) {
            return Err(Error::ScrambleParams(format!(
                "{unpadded_len} bits + {} pad not divisible by {}",
                self.pad_bits, self.block_size
            )));
        }
        Ok(())
    }
}

/// Largest block size in 8..=3 dividing `bit_length`; otherwise 3 with
/// enough zero padding to make it divide.
pub fn choose_block_size(bit_length: usize) -> (usize, usize) {
    (MIN_BLOCK..=MAX_BLOCK)
        .rev()
        .find(|x| bit_length.is_multiple_of(*x))
        .map(|x| (x, 0))
        .unwrap_or((MIN_BLOCK, (MIN_BLOCK - bit_length % MIN_BLOCK) % MIN_BLOCK))
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// The `index`-th permutation of `1..=x` in lexicographic order, decoded
/// from the factorial number system.
pub fn nth_permutation(x: usize, index: u64) -> Result<Vec<usize>> {
    if !(MIN_BLOCK..=MAX_BLOCK).contains(&x) || index >= factorial(x) {
        return Err(Error::PermutationIndex { block: x, index });
    }
    let mut p = [0usize; MAX_BLOCK];
    decode_pattern(x, index, &mut p);
    Ok(p[..x].iter().map(|&i| i + 1).collect())
}

/// 0-based form of [`nth_permutation`] written into `out[..x]`.
fn decode_pattern(x: usize, index: u64, out: &mut [usize; MAX_BLOCK]) {
    let mut pool = [0usize; MAX_BLOCK];
    for (i, slot) in pool.iter_mut().enumerate() {
        *slot = i;
    }
    let mut remaining = x;
    let mut rest = index;
    for (k, slot) in out.iter_mut().take(x).enumerate() {
        let f = factorial(x - 1 - k);
        let pick = (rest / f) as usize;
        rest %= f;
        *slot = pool[pick];
        pool.copy_within(pick + 1..remaining, pick);
        remaining -= 1;
    }
}

/// Calls `f(block_index, pattern)` for each block, drawing one pattern
/// index per block from the seeded stream.
fn for_each_pattern(x: usize, seed: u64, blocks: usize, mut f: impl FnMut(usize, &[usize])) {
    let mut prng = Prng::new(seed);
    let n = factorial(x);
    let mut p = [0usize; MAX_BLOCK];
    for j in 0..blocks {
        decode_pattern(x, prng.below(n), &mut p);
        f(j, &p[..x]);
    }
}

/// Pads with `pad_bits` zeros, then sets `out[k] = in[p[k]]` inside each block.
pub fn scramble(bits: &[bool], params: &ScrambleParams) -> Result<Vec<bool>> {
    params.check(bits.len())?;
    let x = params.block_size;
    let mut padded = bits.to_vec();
    padded.resize(bits.len() + params.pad_bits, false);
    let mut out = Vec::with_capacity(padded.len());
    for_each_pattern(x, params.seed, padded.len() / x, |j, p| {
        let block = &padded[j * x..(j + 1) * x];
        out.extend(p.iter().map(|&src| block[src]));
    });
    Ok(out)
}

/// Inverse of [`scramble`]. Fails if the stripped pad bits are not zero,
/// which happens when the seed or block size is wrong.
pub fn unscramble(bits: &[bool], params: &ScrambleParams) -> Result<Vec<bool>> {
    if params.pad_bits > bits.len() {
        return Err(Error::ScrambleParams(format!(
            "{} pad bits exceed {}-bit input",
            params.pad_bits,
            bits.len()
        )));
    }
    params.check(bits.len() - params.pad_bits)?;
    let x = params.block_size;
    let mut out = vec![false; bits.len()];
    for_each_pattern(x, params.seed, bits.len() / x, |j, p| {
        let base = j * x;
        for (k, &src) in p.iter().enumerate() {
            out[base + src] = bits[base + k];
        }
    });
    let keep = bits.len() - params.pad_bits;
    if out[keep..].iter().any(|&b| b) {
        return Err(Error::NonZeroPadding("scrambled stream"));
    }
    out.truncate(keep);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_size_examples() {
        assert_eq!(choose_block_size(24), (8, 0));
        assert_eq!(choose_block_size(25), (5, 0));
        assert_eq!(choose_block_size(23), (3, 1));
        assert_eq!(choose_block_size(1), (3, 2));
        assert_eq!(choose_block_size(11), (3, 1));
        assert_eq!(choose_block_size(14), (7, 0));
    }

    #[test]
    fn block_size_always_divides_padded_length() {
        for n in 1..5000 {
            let (x, pad) = choose_block_size(n);
            assert!((MIN_BLOCK..=MAX_BLOCK).contains(&x));
            assert!(pad <= 2);
            assert_eq!((n + pad) % x, 0);
            if pad > 0 {
                assert!((MIN_BLOCK..=MAX_BLOCK).all(|d| n % d != 0));
            }
        }
    }

    /// Reference recurrence written out longhand, independent of `Prng`.
    fn splitmix_reference(seed: u64, n: usize) -> Vec<u64> {
        let mut s = seed as u128;
        let m = 1u128 << 64;
        (0..n)
            .map(|_| {
                s = (s + 0x9E3779B97F4A7C15) % m;
                let mut z = s;
                z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) % m;
                z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) % m;
                (z ^ (z >> 31)) as u64
            })
            .collect()
    }

    #[test]
    fn splitmix_matches_reference() {
        // published first output for seed 0
        assert_eq!(Prng::new(0).next_u64(), 0xE220_A839_7B1D_CDAF);
        for seed in [0u64, 1, 2, 42, u64::MAX] {
            let mut p = Prng::new(seed);
            let got: Vec<u64> = (0..16).map(|_| p.next_u64()).collect();
            assert_eq!(got, splitmix_reference(seed, 16));
        }
        assert_ne!(Prng::new(1).next_u64(), Prng::new(2).next_u64());
        let mut a = Prng::new(7);
        let mut b = Prng::new(7);
        assert!((0..100).all(|_| a.next_u64() == b.next_u64()));
    }

    #[test]
    fn permutation_indexing() {
        assert_eq!(nth_permutation(3, 0).unwrap(), vec![1, 2, 3]);
        assert_eq!(nth_permutation(3, 1).unwrap(), vec![1, 3, 2]);
        assert_eq!(nth_permutation(3, 5).unwrap(), vec![3, 2, 1]);
        assert!(nth_permutation(3, 6).is_err());
        assert!(nth_permutation(9, 0).is_err());
    }

    /// Enumerates permutations by repeated next-lexicographic steps.
    fn lexicographic(x: usize) -> Vec<Vec<usize>> {
        let mut cur: Vec<usize> = (1..=x).collect();
        let mut all = vec![cur.clone()];
        loop {
            let Some(i) = (0..x - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
                return all;
            };
            let j = (i + 1..x).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
            all.push(cur.clone());
        }
    }

    #[test]
    fn nth_permutation_matches_enumeration() {
        for x in MIN_BLOCK..=6 {
            let all = lexicographic(x);
            assert_eq!(all.len() as u64, factorial(x));
            for (i, p) in all.iter().enumerate() {
                assert_eq!(&nth_permutation(x, i as u64).unwrap(), p);
            }
        }
        assert_eq!(
            nth_permutation(8, 40319).unwrap(),
            vec![8, 7, 6, 5, 4, 3, 2, 1]
        );
    }

    #[test]
    fn pattern_definition() {
        // (2,3,1) maps (b1,b2,b3) to (b2,b3,b1)
        let p: Vec<usize> = vec![2, 3, 1];
        let block = ['a', 'b', 'c'];
        let out: Vec<char> = p.iter().map(|&i| block[i - 1]).collect();
        assert_eq!(out, vec!['b', 'c', 'a']);
    }

    #[test]
    fn identity_draws_leave_input_unchanged() {
        // find a seed whose first draw is a multiple of 3! = 6, i.e. identity
        let seed = (0u64..)
            .find(|&s| Prng::new(s).next_u64().is_multiple_of(6))
            .unwrap();
        let bits = vec![true, false, false];
        let prm = ScrambleParams {
            block_size: 3,
            seed,
            pad_bits: 0,
        };
        assert_eq!(scramble(&bits, &prm).unwrap(), bits);
    }

    #[test]
    fn scramble_pads_and_roundtrips() {
        let bits: Vec<bool> = (0..23).map(|i| i % 5 < 2).collect();
        let (x, pad) = choose_block_size(bits.len());
        let prm = ScrambleParams {
            block_size: x,
            seed: 99,
            pad_bits: pad,
        };
        let s = scramble(&bits, &prm).unwrap();
        assert_eq!(s.len(), 24);
        assert_eq!(
            s.iter().filter(|&&b| b).count(),
            bits.iter().filter(|&&b| b).count()
        );
        assert_eq!(unscramble(&s, &prm).unwrap(), bits);
    }

    #[test]
    fn inconsistent_params_rejected() {
        let prm = ScrambleParams {
            block_size: 4,
            seed: 1,
            pad_bits: 0,
        };
        assert!(scramble(&[true; 10], &prm).is_err());
        let prm = ScrambleParams {
            block_size: 9,
            seed: 1,
            pad_bits: 0,
        };
        assert!(scramble(&[true; 9], &prm).is_err());
    }

    #[test]
    fn set_pad_bit_detected() {
        let prm = ScrambleParams {
            block_size: 3,
            seed: 5,
            pad_bits: 1,
        };
        // all-ones stream cannot unscramble to a zero pad bit
        assert_eq!(
            unscramble(&[true; 9], &prm),
            Err(Error::NonZeroPadding("scrambled stream"))
        );
    }
}
