//! Grayscale working images and file I/O.

use std::path::Path;

use image::{DynamicImage, ImageReader};

use crate::error::{Error, Result};

/// Real-valued grayscale image, row-major, nominal intensity range `[0, 255]`.
///
/// Reconstructions from partial spectra are not integer valued and may
/// leave the nominal range; intensities are only quantized on save.
#[derive(Clone, Debug, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::Dimensions {
                width,
                height,
                reason: "both sides must be at least 2 pixels",
            });
        }
        if pixels.len() != width * height {
            return Err(Error::Dimensions {
                width,
                height,
                reason: "pixel buffer length does not match",
            });
        }
        if pixels.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("pixels", "intensities must be finite"));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().sum::<f64>() / self.pixels.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.pixels.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.pixels.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Applies `f` to every intensity.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.width, self.height, self.pixels.iter().map(|&v| f(v)).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut pixels = Vec::with_capacity(self.pixels.len());
        for x in 0..self.width {
            for y in 0..self.height {
                pixels.push(self.get(x, y));
            }
        }
        Self {
            width: self.height,
            height: self.width,
            pixels,
        }
    }

    /// 8-bit quantization used on save: round half up, clamp to `[0, 255]`.
    pub fn to_u8(&self) -> Vec<u8> {
        self.pixels.iter().map(|&v| quantize(v)).collect()
    }

    pub(crate) fn same_shape(&self, other: &GrayImage) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(())
    }
}

#[inline]
fn quantize(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// 8-bit RGB image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::Dimensions {
                width,
                height,
                reason: "RGB image must be non-empty with one triple per pixel",
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }
}

/// Result of [`load_image`]: color files stay RGB, single-channel files stay gray.
#[derive(Clone, Debug, PartialEq)]
pub enum LoadedImage {
    Rgb(RgbImage),
    Gray(GrayImage),
}

impl LoadedImage {
    pub fn into_gray(self) -> Result<GrayImage> {
        match self {
            LoadedImage::Rgb(rgb) => to_grayscale(&rgb),
            LoadedImage::Gray(gray) => Ok(gray),
        }
    }
}

/// BT.601 luma, kept as a real value.
pub fn to_grayscale(img: &RgbImage) -> Result<GrayImage> {
    let pixels = img
        .pixels
        .iter()
        .map(|&[r, g, b]| 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64)
        .collect();
    GrayImage::new(img.width, img.height, pixels)
}

/// Bilinear resize with pixel-center alignment and edge clamping.
pub fn resize(img: &GrayImage, width: usize, height: usize) -> Result<GrayImage> {
    if width < 2 || height < 2 {
        return Err(Error::Dimensions {
            width,
            height,
            reason: "resize target must be at least 2x2",
        });
    }
    if width == img.width && height == img.height {
        return Ok(img.clone());
    }
    let xs = sample_positions(img.width, width);
    let ys = sample_positions(img.height, height);
    let mut pixels = Vec::with_capacity(width * height);
    for &(y0, y1, ty) in &ys {
        for &(x0, x1, tx) in &xs {
            let top = img.get(x0, y0) * (1.0 - tx) + img.get(x1, y0) * tx;
            let bottom = img.get(x0, y1) * (1.0 - tx) + img.get(x1, y1) * tx;
            pixels.push(top * (1.0 - ty) + bottom * ty);
        }
    }
    GrayImage::new(width, height, pixels)
}

fn sample_positions(src: usize, dst: usize) -> Vec<(usize, usize, f64)> {
    let scale = src as f64 / dst as f64;
    (0..dst)
        .map(|i| {
            let pos = ((i as f64 + 0.5) * scale - 0.5).clamp(0.0, (src - 1) as f64);
            let lo = pos.floor() as usize;
            let hi = (lo + 1).min(src - 1);
            (lo, hi, pos - lo as f64)
        })
        .collect()
}

/// Reads a PNG or JPEG file. RGBA inputs lose their alpha channel.
pub fn load_image(path: impl AsRef<Path>) -> Result<LoadedImage> {
    let path = path.as_ref();
    let image_err = |source| Error::Image {
        path: path.to_path_buf(),
        source,
    };
    let decoded = ImageReader::open(path)?
        .with_guessed_format()?
        .decode()
        .map_err(image_err)?;
    from_dynamic(decoded)
}

/// Decodes an in-memory PNG or JPEG stream.
pub fn load_image_from_memory(bytes: &[u8]) -> Result<LoadedImage> {
    let decoded = image::load_from_memory(bytes).map_err(Error::Jpeg)?;
    from_dynamic(decoded)
}

fn from_dynamic(decoded: DynamicImage) -> Result<LoadedImage> {
    let (width, height) = (decoded.width() as usize, decoded.height() as usize);
    if decoded.color().has_color() {
        let rgb = decoded.to_rgb8();
        let pixels = rgb.pixels().map(|p| p.0).collect();
        Ok(LoadedImage::Rgb(RgbImage::new(width, height, pixels)?))
    } else {
        let luma = decoded.to_luma8();
        let pixels = luma.as_raw().iter().map(|&v| v as f64).collect();
        Ok(LoadedImage::Gray(GrayImage::new(width, height, pixels)?))
    }
}

/// Loads any supported file as a grayscale image.
pub fn load_gray(path: impl AsRef<Path>) -> Result<GrayImage> {
    load_image(path)?.into_gray()
}

/// Loads, converts to grayscale and resizes to `size`×`size`.
pub fn load_prepared(path: impl AsRef<Path>, size: usize) -> Result<GrayImage> {
    resize(&load_gray(path)?, size, size)
}

/// Encodes as an 8-bit grayscale PNG in memory.
pub fn encode_png(img: &GrayImage) -> Result<Vec<u8>> {
    let buf = image::GrayImage::from_raw(img.width as u32, img.height as u32, img.to_u8())
        .expect("buffer length matches dimensions");
    let mut out = std::io::Cursor::new(Vec::new());
    buf.write_to(&mut out, image::ImageFormat::Png)
        .map_err(Error::Jpeg)?;
    Ok(out.into_inner())
}

pub fn save_png(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_png(img)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rgb1(r: u8, g: u8, b: u8) -> RgbImage {
        RgbImage::new(1, 1, vec![[r, g, b]]).unwrap()
    }

    fn gray_of(px: [u8; 3]) -> f64 {
        // 1x1 is below the GrayImage minimum, so go through a 2x2 image
        let img = RgbImage::new(2, 2, vec![px; 4]).unwrap();
        to_grayscale(&img).unwrap().get(0, 0)
    }

    #[test]
    fn grayscale_weights() {
        assert_eq!(gray_of([255, 255, 255]), 255.0);
        assert_eq!(gray_of([0, 0, 0]), 0.0);
        assert!((gray_of([255, 0, 0]) - 76.245).abs() < 1e-12);
        assert!(to_grayscale(&rgb1(1, 2, 3)).is_err());
    }

    #[test]
    fn rejects_bad_images() {
        assert!(GrayImage::new(1, 5, vec![0.0; 5]).is_err());
        assert!(GrayImage::new(2, 2, vec![0.0; 3]).is_err());
        assert!(GrayImage::new(2, 2, vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn resize_constant_and_identity() {
        let c = GrayImage::constant(5, 7, 7.0).unwrap();
        let r = resize(&c, 13, 3).unwrap();
        assert!(r.pixels().iter().all(|&v| (v - 7.0).abs() < 1e-12));

        let img = GrayImage::from_fn(16, 16, |x, y| ((x * 31 + y * 17) % 256) as f64).unwrap();
        assert_eq!(resize(&img, 16, 16).unwrap(), img);
        assert!(resize(&img, 1, 4).is_err());
    }

    #[test]
    fn resize_two_by_two_ramp() {
        // Hand bilinear: target x=i maps to source (i+0.5)/2-0.5, clamped to [0,1].
        let img = GrayImage::new(2, 2, vec![0.0, 255.0, 0.0, 255.0]).unwrap();
        let r = resize(&img, 4, 2).unwrap();
        let expected = [0.0, 63.75, 191.25, 255.0];
        for y in 0..2 {
            for (x, e) in expected.iter().enumerate() {
                assert!((r.get(x, y) - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn resize_up_down_ramp() {
        let img = GrayImage::from_fn(16, 12, |x, y| 4.0 * x as f64 + 3.0 * y as f64).unwrap();
        let back = resize(&resize(&img, 32, 24).unwrap(), 16, 12).unwrap();
        let err = img
            .pixels()
            .iter()
            .zip(back.pixels())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1.0, "max error {err}");
    }

    #[test]
    fn quantization_rules() {
        let img = GrayImage::new(2, 2, vec![255.7, 127.5, -3.0, 12.49]).unwrap();
        assert_eq!(img.to_u8(), vec![255, 128, 0, 12]);
    }

    #[test]
    fn png_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ramp.png");
        let img = GrayImage::from_fn(9, 5, |x, y| ((x * 29 + y * 53) % 256) as f64).unwrap();
        save_png(&img, &path).unwrap();
        assert_eq!(load_gray(&path).unwrap(), img);
    }

    #[test]
    fn load_reports_missing_and_unsupported() {
        let dir = tempfile::tempdir().unwrap();
        assert!(load_image(dir.path().join("nope.png")).is_err());
        let junk = dir.path().join("junk.png");
        std::fs::write(&junk, b"definitely not an image").unwrap();
        let err = load_image(&junk).unwrap_err();
        assert!(err.to_string().contains("junk.png"));
    }
}
