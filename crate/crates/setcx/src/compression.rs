//! Deterministic lossless-compression backends.
//!
//! Compressed size is the crate's computable stand-in for Kolmogorov
//! complexity: `C(x)` below always means "byte length of the compressed
//! representation of `x`". Every backend is a DEFLATE variant differing only
//! in container framing, so the choice trades header overhead against
//! compatibility:
//!
//! | algorithm | container      | empty-input size |
//! |-----------|----------------|------------------|
//! | `deflate` | none (raw)     | 2 bytes          |
//! | `zlib`    | zlib (RFC1950) | 8 bytes          |
//! | `gzip`    | gzip (RFC1952) | 20 bytes         |
//!
//! The reference configuration is raw DEFLATE at level 9 (maximum effort):
//! it carries no container header, which maximizes the usable distance
//! signal between short strings. Calls are stateless — no dictionary or
//! window survives between invocations — so results are deterministic and
//! safe to evaluate from any number of threads.

use std::io::Write;

use flate2::write::{DeflateEncoder, GzEncoder, ZlibEncoder};
use flate2::Compression;

use crate::error::{Error, Result};

/// Maximum supported effort level (flate2's `Compression::best()`).
pub const MAX_LEVEL: u32 = 9;

/// Container framing for the DEFLATE stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Raw DEFLATE stream, no container (reference backend).
    Deflate,
    /// zlib container: 2-byte header + Adler-32 trailer.
    Zlib,
    /// gzip container: 10-byte header + CRC-32/length trailer.
    Gzip,
}

impl Algorithm {
    /// Parses an algorithm id as used in CLI flags and output headers.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "deflate" => Ok(Algorithm::Deflate),
            "zlib" => Ok(Algorithm::Zlib),
            "gzip" => Ok(Algorithm::Gzip),
            other => Err(Error::config(format!(
                "unsupported algorithm id {other:?} (expected deflate, zlib, or gzip)"
            ))),
        }
    }

    /// The id used in CLI flags and output headers.
    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Deflate => "deflate",
            Algorithm::Zlib => "zlib",
            Algorithm::Gzip => "gzip",
        }
    }
}

/// A fully-specified, deterministic compression backend.
///
/// Identical `(spec, input)` pairs always yield identical sizes; this is the
/// determinism contract the distance and measure layers build on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompressorSpec {
    pub algorithm: Algorithm,
    /// Effort level in `0..=9`; the reference uses 9.
    pub level: u32,
}

impl Default for CompressorSpec {
    /// The reference backend: raw DEFLATE at maximum effort.
    fn default() -> Self {
        CompressorSpec { algorithm: Algorithm::Deflate, level: MAX_LEVEL }
    }
}

/// Byte sink that counts what is written and discards it; only compressed
/// sizes matter, never the compressed bytes themselves.
struct ByteCounter(u64);

impl Write for ByteCounter {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.0 += buf.len() as u64;
        Ok(buf.len())
    }

    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

impl CompressorSpec {
    /// Creates a spec, validating the effort level.
    pub fn new(algorithm: Algorithm, level: u32) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::config(format!(
                "compression level {level} out of range 0..={MAX_LEVEL}"
            )));
        }
        Ok(CompressorSpec { algorithm, level })
    }

    /// Identifier recorded in output headers, e.g. `deflate/9`.
    pub fn id_string(&self) -> String {
        format!("{}/{}", self.algorithm.id(), self.level)
    }

    /// Compresses the concatenation of the given chunks and returns the
    /// compressed byte length. Chunks are streamed into one encoder, which
    /// is exactly equivalent to compressing their concatenation.
    fn size_of_chunks(&self, chunks: &[&[u8]]) -> usize {
        let level = Compression::new(self.level);
        let counter = ByteCounter(0);
        let total = match self.algorithm {
            Algorithm::Deflate => {
                let mut enc = DeflateEncoder::new(counter, level);
                for chunk in chunks {
                    enc.write_all(chunk).expect("counting sink cannot fail");
                }
                enc.finish().expect("counting sink cannot fail").0
            }
            Algorithm::Zlib => {
                let mut enc = ZlibEncoder::new(counter, level);
                for chunk in chunks {
                    enc.write_all(chunk).expect("counting sink cannot fail");
                }
                enc.finish().expect("counting sink cannot fail").0
            }
            Algorithm::Gzip => {
                let mut enc = GzEncoder::new(counter, level);
                for chunk in chunks {
                    enc.write_all(chunk).expect("counting sink cannot fail");
                }
                enc.finish().expect("counting sink cannot fail").0
            }
        };
        total as usize
    }

    /// `C(x)`: compressed size of `x` in bytes. Upper-bounds the Kolmogorov
    /// complexity of `x` up to the backend's constant header overhead.
    pub fn compressed_size(&self, x: &[u8]) -> usize {
        self.size_of_chunks(&[x])
    }

    /// `C(xy)`: compressed size of `x` followed immediately by `y`, with no
    /// separator inserted.
    pub fn joint_size(&self, x: &[u8], y: &[u8]) -> usize {
        self.size_of_chunks(&[x, y])
    }

    /// Header constant `h0`: the compressed size of empty input.
    pub fn empty_size(&self) -> usize {
        self.compressed_size(&[])
    }
}
