//! `PHC1` container: the retained coefficients of a [`CompressedImage`].
//!
//! Little-endian layout:
//!
//! ```text
//! "PHC1" | width u16 | height u16 | count u32 | count × { fx u16 | fy u16 | re f32 | im f32 }
//! ```
//!
//! [`pack`] wraps that layout in a raw DEFLATE stream; the packed length is
//! the reported file size.

use std::io::{Read, Write};

use flate2::read::DeflateDecoder;
use flate2::write::DeflateEncoder;
use flate2::Compression;
use num_complex::Complex64;

use crate::pipeline::CompressedImage;
use crate::spectrum::FreqIndex;

pub const MAGIC: &[u8; 4] = b"PHC1";
pub const HEADER_LEN: usize = 12;
pub const ENTRY_LEN: usize = 12;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("bad magic {0:02x?}, expected \"PHC1\"")]
    BadMagic([u8; 4]),
    #[error("truncated: need {needed} bytes, have {available}")]
    Truncated { needed: usize, available: usize },
    #[error("{0} trailing bytes after the last entry")]
    TrailingBytes(usize),
    #[error("duplicate frequency ({}, {})", .0.fx, .0.fy)]
    DuplicateIndex(FreqIndex),
    #[error("entries not sorted by (fy, fx) at ({}, {})", .0.fx, .0.fy)]
    Unsorted(FreqIndex),
    #[error("frequency ({}, {}) is not the canonical member of its conjugate pair", .0.fx, .0.fy)]
    NonCanonical(FreqIndex),
    #[error("frequency ({}, {}) outside a {width}x{height} grid", .index.fx, .index.fy)]
    OutOfRange {
        index: FreqIndex,
        width: usize,
        height: usize,
    },
    #[error("container has no entries")]
    Empty,
    #[error("invalid dimensions {0}x{1}")]
    BadDimensions(usize, usize),
    #[error("non-finite coefficient at ({}, {})", .0.fx, .0.fy)]
    NonFinite(FreqIndex),
    #[error("deflate stream: {0}")]
    Inflate(String),
}

/// Serializes the container layout (coefficients rounded to `f32`).
pub fn encode(c: &CompressedImage) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + ENTRY_LEN * c.entries().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(c.width() as u16).to_le_bytes());
    out.extend_from_slice(&(c.height() as u16).to_le_bytes());
    out.extend_from_slice(&(c.entries().len() as u32).to_le_bytes());
    for &(f, x) in c.entries() {
        out.extend_from_slice(&(f.fx as u16).to_le_bytes());
        out.extend_from_slice(&(f.fy as u16).to_le_bytes());
        out.extend_from_slice(&(x.re as f32).to_le_bytes());
        out.extend_from_slice(&(x.im as f32).to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<CompressedImage, DecodeError> {
    if bytes.len() < HEADER_LEN {
        // a short buffer with the wrong start is still a magic failure
        if bytes.len() >= 4 && &bytes[..4] != MAGIC {
            return Err(DecodeError::BadMagic(bytes[..4].try_into().unwrap()));
        }
        return Err(DecodeError::Truncated {
            needed: HEADER_LEN,
            available: bytes.len(),
        });
    }
    let magic: [u8; 4] = bytes[..4].try_into().unwrap();
    if &magic != MAGIC {
        return Err(DecodeError::BadMagic(magic));
    }
    let width = u16::from_le_bytes([bytes[4], bytes[5]]) as usize;
    let height = u16::from_le_bytes([bytes[6], bytes[7]]) as usize;
    let count = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let needed = HEADER_LEN + count * ENTRY_LEN;
    if bytes.len() < needed {
        return Err(DecodeError::Truncated {
            needed,
            available: bytes.len(),
        });
    }
    if bytes.len() > needed {
        return Err(DecodeError::TrailingBytes(bytes.len() - needed));
    }
    let entries = bytes[HEADER_LEN..]
        .chunks_exact(ENTRY_LEN)
        .map(|e| {
            let f = FreqIndex::new(
                u16::from_le_bytes([e[0], e[1]]) as usize,
                u16::from_le_bytes([e[2], e[3]]) as usize,
            );
            let re = f32::from_le_bytes(e[4..8].try_into().unwrap());
            let im = f32::from_le_bytes(e[8..12].try_into().unwrap());
            (f, Complex64::new(re as f64, im as f64))
        })
        .collect();
    CompressedImage::new(width, height, entries)
}

/// Container layout wrapped in raw DEFLATE.
pub fn pack(c: &CompressedImage) -> Vec<u8> {
    let mut enc = DeflateEncoder::new(Vec::new(), Compression::best());
    enc.write_all(&encode(c)).expect("writing to a Vec cannot fail");
    enc.finish().expect("writing to a Vec cannot fail")
}

pub fn unpack(bytes: &[u8]) -> Result<CompressedImage, DecodeError> {
    let mut raw = Vec::new();
    DeflateDecoder::new(bytes)
        .read_to_end(&mut raw)
        .map_err(|e| DecodeError::Inflate(e.to_string()))?;
    decode(&raw)
}
