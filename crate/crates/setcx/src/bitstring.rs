//! Bit strings, their byte encodings, and the random operations the
//! experiments are built from (generation, perturbation, permutation).

use std::fmt;
use std::io::BufRead;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// How a [`BitString`] is rendered into bytes before compression.
///
/// * `Ascii01` — one byte per bit, `b'0'` or `b'1'`. The default: at typical
///   experiment lengths (L ≈ 1000) it gives the compressor one symbol per
///   bit to work with, keeping the distance signal well above the backend's
///   header noise.
/// * `Packed` — 8 bits per byte, most significant bit first, zero-padded in
///   the final byte. Kept for large-L studies where one byte per bit would
///   be wasteful.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EncodingMode {
    #[default]
    Ascii01,
    Packed,
}

impl EncodingMode {
    /// Parses the id used in CLI flags and file headers.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ascii01" => Ok(EncodingMode::Ascii01),
            "packed" => Ok(EncodingMode::Packed),
            other => Err(Error::config(format!(
                "unknown encoding {other:?} (expected ascii01 or packed)"
            ))),
        }
    }

    /// The id used in CLI flags and file headers.
    pub fn id(self) -> &'static str {
        match self {
            EncodingMode::Ascii01 => "ascii01",
            EncodingMode::Packed => "packed",
        }
    }
}

/// An immutable finite sequence of bits (length ≥ 1).
///
/// Bits are stored one per byte with values 0/1, which keeps perturbation,
/// permutation, and Boolean-network stepping branch-free and fast at the
/// lengths this crate works with.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    /// Builds a bit string from 0/1 byte values.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::domain("bit string must have length >= 1"));
        }
        if let Some(bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::domain(format!("bit value {bad} is not 0 or 1")));
        }
        Ok(BitString { bits })
    }

    /// Parses a `'0'`/`'1'` character string.
    pub fn from_01_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::domain("bit string must have length >= 1"));
        }
        let bits = s
            .bytes()
            .map(|c| match c {
                b'0' => Ok(0u8),
                b'1' => Ok(1u8),
                other => Err(Error::domain(format!(
                    "invalid character {:?} in bit string (expected '0' or '1')",
                    other as char
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(BitString { bits })
    }

    /// Draws `l` i.i.d. uniform bits from the given stream.
    pub fn random(l: usize, rng: &mut ChaCha8Rng) -> Result<Self> {
        if l == 0 {
            return Err(Error::domain("cannot draw a bit string of length 0"));
        }
        Ok(BitString { bits: (0..l).map(|_| rng.gen_range(0..=1u8)).collect() })
    }

    /// Length in bits.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    /// Always false: zero-length bit strings cannot be constructed.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The bit values, one byte per bit (0 or 1).
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Number of one-bits.
    pub fn ones(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// Hamming distance to another string of the same length.
    pub fn hamming(&self, other: &BitString) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::domain(format!(
                "hamming distance needs equal lengths ({} vs {})",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count())
    }

    /// Returns a copy with exactly the listed bit positions inverted.
    /// Positions must be in range and pairwise distinct.
    pub fn flip_bits(&self, positions: &[usize]) -> Result<Self> {
        let mut bits = self.bits.clone();
        let mut seen = vec![false; bits.len()];
        for &p in positions {
            if p >= bits.len() {
                return Err(Error::domain(format!(
                    "flip position {p} out of range for length {}",
                    bits.len()
                )));
            }
            if seen[p] {
                return Err(Error::domain(format!("flip position {p} listed twice")));
            }
            seen[p] = true;
            bits[p] ^= 1;
        }
        Ok(BitString { bits })
    }

    /// Returns a uniformly random permutation of the bits (Fisher–Yates);
    /// the multiset of bit values is preserved exactly.
    pub fn permuted(&self, rng: &mut ChaCha8Rng) -> Self {
        let mut bits = self.bits.clone();
        bits.shuffle(rng);
        BitString { bits }
    }

    /// Renders the bits into bytes under the given encoding.
    pub fn encode(&self, mode: EncodingMode) -> Vec<u8> {
        match mode {
            EncodingMode::Ascii01 => self.bits.iter().map(|&b| b + b'0').collect(),
            EncodingMode::Packed => {
                let mut out = vec![0u8; self.bits.len().div_ceil(8)];
                for (i, &b) in self.bits.iter().enumerate() {
                    out[i / 8] |= b << (7 - i % 8);
                }
                out
            }
        }
    }

    /// Inverse of [`encode`](Self::encode). `len_bits` disambiguates the
    /// zero-padding of packed bytes; for ascii01 it must equal the byte
    /// count.
    pub fn decode(bytes: &[u8], mode: EncodingMode, len_bits: usize) -> Result<Self> {
        if len_bits == 0 {
            return Err(Error::domain("bit string must have length >= 1"));
        }
        match mode {
            EncodingMode::Ascii01 => {
                if bytes.len() != len_bits {
                    return Err(Error::domain(format!(
                        "ascii01 expects {len_bits} bytes, got {}",
                        bytes.len()
                    )));
                }
                BitString::from_01_str(std::str::from_utf8(bytes).map_err(|_| {
                    Error::domain("ascii01 bytes must be '0'/'1' characters")
                })?)
            }
            EncodingMode::Packed => {
                if bytes.len() != len_bits.div_ceil(8) {
                    return Err(Error::domain(format!(
                        "packed expects {} bytes for {len_bits} bits, got {}",
                        len_bits.div_ceil(8),
                        bytes.len()
                    )));
                }
                let bits = (0..len_bits)
                    .map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1)
                    .collect();
                BitString::from_bits(bits)
            }
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

/// A parsed string-set file: the member strings plus the encoding they
/// should be compressed under.
#[derive(Debug, Clone)]
pub struct StringSetFile {
    pub strings: Vec<BitString>,
    pub encoding: EncodingMode,
}

/// Reads a string-set file: one `'0'`/`'1'` string per line, LF-terminated.
/// An optional leading header `#encoding=ascii01|packed` selects the
/// compression encoding (default ascii01); other `#` lines are comments.
/// Parse failures report 1-based line numbers.
pub fn read_string_set(path: &Path) -> Result<StringSetFile> {
    let file = std::fs::File::open(path)?;
    parse_string_set(std::io::BufReader::new(file))
}

/// Parses string-set content from any reader; see [`read_string_set`].
pub fn parse_string_set(reader: impl BufRead) -> Result<StringSetFile> {
    let mut strings = Vec::new();
    let mut encoding = EncodingMode::Ascii01;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim_end_matches('\r');
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            if let Some(value) = rest.trim().strip_prefix("encoding=") {
                encoding = EncodingMode::parse(value.trim())
                    .map_err(|e| Error::parse(lineno, e.to_string()))?;
            }
            continue;
        }
        let bs = BitString::from_01_str(trimmed)
            .map_err(|e| Error::parse(lineno, e.to_string()))?;
        strings.push(bs);
    }
    if strings.is_empty() {
        return Err(Error::parse(1, "no bit strings found in input".to_string()));
    }
    Ok(StringSetFile { strings, encoding })
}
