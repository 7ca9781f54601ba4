//! Pixel-domain quality metrics and Gaussian smoothing.

use crate::error::{Error, Result};
use crate::image_io::GrayImage;

/// SSIM window and stabilizing constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SsimParams {
    /// Side of the square, uniformly weighted window.
    pub window: usize,
    pub c1: f64,
    pub c2: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self {
            window: 11,
            c1: (0.01f64 * 255.0).powi(2),
            c2: (0.03f64 * 255.0).powi(2),
        }
    }
}

impl SsimParams {
    fn validate(&self) -> Result<()> {
        if self.window < 3 || self.window.is_multiple_of(2) {
            return Err(Error::param("window", "SSIM window must be odd and at least 3"));
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            return Err(Error::param("c1/c2", "SSIM constants must be positive"));
        }
        Ok(())
    }
}

pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.same_shape(b)?;
    let sum: f64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / a.len() as f64)
}

pub fn ssim(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    ssim_with(a, b, &SsimParams::default())
}

/// Mean SSIM over every window lying fully inside the image.
pub fn ssim_with(a: &GrayImage, b: &GrayImage, params: &SsimParams) -> Result<f64> {
    params.validate()?;
    a.same_shape(b)?;
    let k = params.window;
    let (w, h) = (a.width(), a.height());
    if w < k || h < k {
        return Err(Error::Dimensions {
            width: w,
            height: h,
            reason: "image smaller than the SSIM window",
        });
    }
    let (pa, pb) = (a.pixels(), b.pixels());
    let n = (k * k) as f64;
    let mut total = 0.0;
    let mut windows = 0usize;
    for y0 in 0..=h - k {
        for x0 in 0..=w - k {
            let (mut sa, mut sb) = (0.0, 0.0);
            for y in y0..y0 + k {
                let row = y * w;
                for x in x0..x0 + k {
                    sa += pa[row + x];
                    sb += pb[row + x];
                }
            }
            let (ma, mb) = (sa / n, sb / n);
            let (mut vaa, mut vbb, mut vab) = (0.0, 0.0, 0.0);
            for y in y0..y0 + k {
                let row = y * w;
                for x in x0..x0 + k {
                    let da = pa[row + x] - ma;
                    let db = pb[row + x] - mb;
                    vaa += da * da;
                    vbb += db * db;
                    vab += da * db;
                }
            }
            let (vaa, vbb, vab) = (vaa / n, vbb / n, vab / n);
            let num = (2.0 * ma * mb + params.c1) * (2.0 * vab + params.c2);
            let den = (ma * ma + mb * mb + params.c1) * (vaa + vbb + params.c2);
            total += num / den;
            windows += 1;
        }
    }
    Ok(total / windows as f64)
}

/// Normalized 1D Gaussian taps on `[-⌈3σ⌉, ⌈3σ⌉]`.
///
/// The 2D kernel is the outer product of these taps with itself, which is the
/// sampled `G_σ(x, y)` renormalized to unit sum.
pub fn gaussian_taps(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    let taps: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / sum).collect()
}

/// Separable Gaussian blur with half-sample symmetric reflection at the edges.
pub fn gaussian_smooth(img: &GrayImage, sigma: f64) -> Result<GrayImage> {
    if sigma.is_nan() || sigma < 0.0 || sigma.is_infinite() {
        return Err(Error::param("sigma", format!("expected finite σ ≥ 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let taps = gaussian_taps(sigma);
    let radius = (taps.len() / 2) as i64;
    let (w, h) = (img.width(), img.height());
    let src = img.pixels();

    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..w {
            tmp[y * w + x] = taps
                .iter()
                .enumerate()
                .map(|(t, &g)| g * row[reflect(x as i64 + t as i64 - radius, w)])
                .sum();
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = taps
                .iter()
                .enumerate()
                .map(|(t, &g)| g * tmp[reflect(y as i64 + t as i64 - radius, h) * w + x])
                .sum();
        }
    }
    GrayImage::new(w, h, out)
}

/// Index into `[0, n)` under symmetric extension `… c b a | a b c … | c b a …`.
#[inline]
fn reflect(i: i64, n: usize) -> usize {
    let period = 2 * n as i64;
    let m = i.rem_euclid(period);
    if m < n as i64 {
        m as usize
    } else {
        (period - 1 - m) as usize
    }
}

/// Anisotropic total variation `Σ |∂x| + |∂y|`.
pub fn total_variation(img: &GrayImage) -> f64 {
    let (w, h) = (img.width(), img.height());
    let mut tv = 0.0;
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                tv += (img.get(x + 1, y) - img.get(x, y)).abs();
            }
            if y + 1 < h {
                tv += (img.get(x, y + 1) - img.get(x, y)).abs();
            }
        }
    }
    tv
}
