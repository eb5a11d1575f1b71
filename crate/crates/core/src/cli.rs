//! Command-line front end. Exit codes: 0 success, 2 usage, 3 I/O,
//! 4 validation or decryption failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis::report;
use crate::error::Error;
use crate::image_io::{parse_container, read_pgm, write_pgm, GrayImage};
use crate::keyschedule::{keygen, parse_key, serialize_key};
use crate::permnet::{flip_stage, omega_stage, omflip_apply, omflip_invert, ControlBits};
use crate::pipeline::{decrypt, encrypt};
use crate::rle2d::{decode_runs, encode_runs, pack_runs, unpack_runs};
use crate::scramble::{choose_block_size, scramble, unscramble, Prng, ScrambleParams};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "omflip",
    about = "Bit-plane image cipher with omega/flip permutation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derive a key file from an image and a master seed.
    Keygen {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = parse_seed)]
        seed: u64,
        #[arg(long)]
        key: PathBuf,
    },
    /// Encrypt a PGM image into a cipher container.
    Encrypt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a cipher container back into a PGM image.
    Decrypt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print entropy, correlation and key-sensitivity metrics.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        key: PathBuf,
        /// Also write the machine-readable lines to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

/// Decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

enum Failure {
    Io(PathBuf, std::io::Error),
    Invalid(Error),
    Selftest(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e)
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Io(path, e)) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            EXIT_IO
        }
        Err(Failure::Invalid(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
        Err(Failure::Selftest(n)) => {
            let _ = writeln!(err, "error: {n} selftest check(s) failed");
            EXIT_INVALID
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Keygen { input, seed, key } => {
            let img = read_pgm(&read(&input)?)?;
            write(&key, &serialize_key(&keygen(&img, seed)?)?)
        }
        Command::Encrypt {
            input,
            key,
            out: dst,
        } => {
            let img = read_pgm(&read(&input)?)?;
            let key = parse_key(&read(&key)?)?;
            write(&dst, &encrypt(&img, &key)?.to_bytes()?)
        }
        Command::Decrypt {
            input,
            key,
            out: dst,
        } => {
            let container = parse_container(&read(&input)?)?;
            let key = parse_key(&read(&key)?)?;
            write(&dst, &write_pgm(&decrypt(&container, &key)?))
        }
        Command::Analyze {
            input,
            key,
            report: report_path,
        } => {
            let img = read_pgm(&read(&input)?)?;
            let key = parse_key(&read(&key)?)?;
            let r = report(&img, &key)?;
            let lines = r.machine_lines().join("\n") + "\n";
            let _ = writeln!(out, "{r}\n");
            let _ = write!(out, "{lines}");
            if let Some(p) = report_path {
                write(&p, lines.as_bytes())?;
            }
            Ok(())
        }
        Command::Selftest => {
            let results = selftest();
            let mut failed = 0;
            for (name, ok) in &results {
                let _ = writeln!(out, "{} {name}", if *ok { "PASS" } else { "FAIL" });
                failed += usize::from(!ok);
            }
            if failed > 0 {
                Err(Failure::Selftest(failed))
            } else {
                Ok(())
            }
        }
    }
}

fn random_bits(prng: &mut Prng, len: usize) -> Vec<bool> {
    (0..len).map(|_| prng.next_u64() & 1 == 1).collect()
}

/// Named invariant checks shipped in the binary.
pub fn selftest() -> Vec<(&'static str, bool)> {
    let mut prng = Prng::new(0x5E1F_7E57);
    let chars = |s: &str| s.chars().collect::<Vec<char>>();
    let mut results = Vec::new();

    results.push((
        "omega stage tables (w=4, w=5)",
        omega_stage(&chars("abcd")).ok() == Some(chars("dacb"))
            && omega_stage(&chars("abcde")).ok() == Some(chars("cadbe")),
    ));
    results.push((
        "flip stage tables (w=4, w=5)",
        flip_stage(&chars("abcd")).ok() == Some(chars("bdca"))
            && flip_stage(&chars("abcde")).ok() == Some(chars("bdace")),
    ));
    let sweep = (2..=1024).all(|w| {
        let s = random_bits(&mut prng, w);
        let o = omega_stage(&s).unwrap();
        flip_stage(&o).unwrap() == s && omega_stage(&flip_stage(&s).unwrap()).unwrap() == s
    });
    results.push(("flip inverts omega for w in 2..=1024", sweep));

    let rle = (0..200).all(|_| {
        let len = 1 + prng.below(2048) as usize;
        let s = random_bits(&mut prng, len);
        let enc = encode_runs(&s).unwrap();
        let packed = pack_runs(&enc).unwrap();
        decode_runs(&enc).unwrap() == s
            && unpack_runs(&packed, enc.field_width, enc.runs.len()).unwrap() == enc.runs
    });
    results.push(("run encode/decode and pack/unpack roundtrip", rle));

    let scr = (0..200).all(|_| {
        let len = 1 + prng.below(2048) as usize;
        let s = random_bits(&mut prng, len);
        let (x, pad) = choose_block_size(len);
        let prm = ScrambleParams {
            block_size: x,
            seed: prng.next_u64(),
            pad_bits: pad,
        };
        unscramble(&scramble(&s, &prm).unwrap(), &prm).unwrap() == s
    });
    results.push(("scramble/unscramble roundtrip", scr));

    let omf = (0..100).all(|_| {
        let len = 2 + prng.below(2048) as usize;
        let s = random_bits(&mut prng, len);
        let k = 1 + prng.below(512) as usize;
        let ctrl = ControlBits(random_bits(&mut prng, k));
        omflip_invert(&omflip_apply(&s, &ctrl).unwrap(), &ctrl).unwrap() == s
    });
    results.push(("OMFLIP apply/invert roundtrip", omf));

    let pipeline = [4usize, 16, 64].iter().all(|&side| {
        let px = (0..side * side).map(|_| prng.next_u64() as u8).collect();
        let img = GrayImage::new(side, side, px).unwrap();
        let key = keygen(&img, prng.next_u64()).unwrap();
        encrypt(&img, &key)
            .and_then(|c| decrypt(&c, &key))
            .is_ok_and(|out| out == img)
    });
    results.push(("image encrypt/decrypt roundtrip", pipeline));
    results
}
