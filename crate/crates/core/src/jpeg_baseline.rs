//! JPEG comparison arm: quality mapping, encode/decode and size measurement.
//!
//! The codec itself is the `image` crate's baseline encoder and decoder; this
//! module only owns the mapping from retention fraction to quality.

use std::io::Cursor;

use image::codecs::jpeg::JpegEncoder;
use image::ExtendedColorType;

use crate::error::{Error, Result};
use crate::image_io::{load_image_from_memory, GrayImage};
use crate::pipeline::check_alpha;

pub const MIN_QUALITY: u8 = 5;
pub const MAX_QUALITY: u8 = 95;

#[derive(Clone, Debug, PartialEq)]
pub struct JpegResult {
    pub quality: u8,
    pub encoded_size: usize,
    pub decoded: GrayImage,
}

/// `clamp(round(100·α), 5, 95)`.
pub fn quality_for(alpha: f64) -> Result<u8> {
    check_alpha(alpha)?;
    let q = (100.0 * alpha + 0.5).floor();
    Ok(q.clamp(MIN_QUALITY as f64, MAX_QUALITY as f64) as u8)
}

/// Single-channel baseline JPEG stream of the 8-bit quantized image.
pub fn encode_jpeg(img: &GrayImage, quality: u8) -> Result<Vec<u8>> {
    if !(1..=100).contains(&quality) {
        return Err(Error::param("quality", format!("must lie in 1..=100, got {quality}")));
    }
    let mut out = Cursor::new(Vec::new());
    JpegEncoder::new_with_quality(&mut out, quality)
        .encode(&img.to_u8(), img.width() as u32, img.height() as u32, ExtendedColorType::L8)
        .map_err(Error::Jpeg)?;
    Ok(out.into_inner())
}

pub fn jpeg_roundtrip(img: &GrayImage, quality: u8) -> Result<JpegResult> {
    let bytes = encode_jpeg(img, quality)?;
    let decoded = load_image_from_memory(&bytes)?.into_gray()?;
    if decoded.width() != img.width() || decoded.height() != img.height() {
        return Err(Error::DimensionMismatch(
            img.width(),
            img.height(),
            decoded.width(),
            decoded.height(),
        ));
    }
    Ok(JpegResult {
        quality,
        encoded_size: bytes.len(),
        decoded,
    })
}
