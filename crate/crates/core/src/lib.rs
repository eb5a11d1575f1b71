//! Bit-plane image cipher.
//!
//! An 8-bit grayscale image is split into eight bit planes. Each plane is
//! linearized along the scan path that run-encodes it most compactly, its
//! run lengths are packed into fixed-width fields, the packed string is
//! block-scrambled under a keyed SplitMix64 stream, and the result is
//! permuted by a chain of omega/flip network stages chosen by a control-bit
//! vector. Decryption reverses each stage.
//!
//! ```
//! use omflip_crypt::{decrypt, encrypt, keygen, GrayImage};
//!
//! let px = (0..64u32).map(|i| (i * 5) as u8).collect();
//! let img = GrayImage::new(8, 8, px).unwrap();
//! let key = keygen(&img, 42).unwrap();
//! let cipher = encrypt(&img, &key).unwrap();
//! assert_eq!(decrypt(&cipher, &key).unwrap(), img);
//! ```

pub mod analysis;
pub mod bitplane;
pub mod bits;
pub mod cli;
pub mod error;
pub mod image_io;
pub mod keyschedule;
pub mod permnet;
pub mod pipeline;
pub mod rle2d;
pub mod scanpath;
pub mod scramble;

pub use error::{Error, Result};
pub use image_io::{
    parse_container, read_pgm, write_container, write_pgm, CipherContainer, GrayImage,
};
pub use keyschedule::{keygen, parse_key, serialize_key, ImageKey, PlaneKey, PlaneMode};
pub use pipeline::{decrypt, encrypt};
