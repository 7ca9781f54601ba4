//! 2D discrete Fourier transform and conjugate-orbit bookkeeping.
//!
//! Forward transforms are unnormalized; the inverse carries the `1/(W·H)`
//! factor. Axes whose length is a power of two use an iterative radix-2
//! Cooley–Tukey FFT, every other length falls back to the direct sum.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::image_io::GrayImage;

/// Frequency index `(fx, fy)` into a `W×H` spectrum.
///
/// Ordered row-major, `(fy, fx)`, which is also the order used to pick the
/// canonical member of a conjugate pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct FreqIndex {
    pub fx: usize,
    pub fy: usize,
}

impl FreqIndex {
    pub const DC: FreqIndex = FreqIndex { fx: 0, fy: 0 };

    pub fn new(fx: usize, fy: usize) -> Self {
        Self { fx, fy }
    }

    /// The index holding the complex conjugate for a real image.
    pub fn partner(self, width: usize, height: usize) -> FreqIndex {
        FreqIndex {
            fx: (width - self.fx) % width,
            fy: (height - self.fy) % height,
        }
    }

    pub fn is_self_conjugate(self, width: usize, height: usize) -> bool {
        self.partner(width, height) == self
    }

    /// Smaller of the index and its conjugate partner.
    pub fn canonical(self, width: usize, height: usize) -> FreqIndex {
        self.min(self.partner(width, height))
    }

    pub fn is_canonical(self, width: usize, height: usize) -> bool {
        self.canonical(width, height) == self
    }

    /// Physical frequency magnitude, using the aliased representative
    /// (`W − fx` above the Nyquist index, likewise for `fy`).
    pub fn radius(self, width: usize, height: usize) -> f64 {
        let ax = self.fx.min(width - self.fx) as f64;
        let ay = self.fy.min(height - self.fy) as f64;
        ax.hypot(ay)
    }

    pub(crate) fn check(self, width: usize, height: usize) -> Result<()> {
        if self.fx >= width || self.fy >= height {
            return Err(Error::FrequencyOutOfRange {
                fx: self.fx,
                fy: self.fy,
                width,
                height,
            });
        }
        Ok(())
    }
}

impl Ord for FreqIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.fy, self.fx).cmp(&(other.fy, other.fx))
    }
}

impl PartialOrd for FreqIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Complex coefficient grid `X[fy][fx]`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    width: usize,
    height: usize,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(width: usize, height: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if width < 2 || height < 2 || coeffs.len() != width * height {
            return Err(Error::Dimensions {
                width,
                height,
                reason: "spectrum needs at least 2x2 coefficients, one per index",
            });
        }
        Ok(Self {
            width,
            height,
            coeffs,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![Complex64::new(0.0, 0.0); width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn get(&self, f: FreqIndex) -> Complex64 {
        self.coeffs[f.fy * self.width + f.fx]
    }

    #[inline]
    pub fn set(&mut self, f: FreqIndex, value: Complex64) {
        self.coeffs[f.fy * self.width + f.fx] = value;
    }

    /// Largest `|X[f] − conj(X[−f])|` over the grid.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for fy in 0..self.height {
            for fx in 0..self.width {
                let f = FreqIndex::new(fx, fy);
                let p = f.partner(self.width, self.height);
                worst = worst.max((self.get(f) - self.get(p).conj()).norm());
            }
        }
        worst
    }
}

/// Which 1D transform to run along each axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    /// Radix-2 FFT where the axis length is a power of two, direct otherwise.
    Auto,
    /// Direct `O(n²)` evaluation on every axis.
    Direct,
}

pub fn dft2(img: &GrayImage) -> Spectrum {
    dft2_with(img, Transform::Auto)
}

pub fn dft2_with(img: &GrayImage, transform: Transform) -> Spectrum {
    let data = img.pixels().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let coeffs = transform_2d(data, img.width(), img.height(), transform, false);
    Spectrum {
        width: img.width(),
        height: img.height(),
        coeffs,
    }
}

/// Complex inverse transform including the `1/(W·H)` normalization.
pub fn idft2_complex(spec: &Spectrum) -> Vec<Complex64> {
    let n = (spec.width * spec.height) as f64;
    let mut out = transform_2d(
        spec.coeffs.clone(),
        spec.width,
        spec.height,
        Transform::Auto,
        true,
    );
    out.iter_mut().for_each(|c| *c /= n);
    out
}

/// Real part of the inverse transform.
pub fn idft2(spec: &Spectrum) -> GrayImage {
    let pixels = idft2_complex(spec).into_iter().map(|c| c.re).collect();
    GrayImage::new(spec.width, spec.height, pixels).expect("spectrum dimensions are valid")
}

fn transform_2d(
    mut data: Vec<Complex64>,
    width: usize,
    height: usize,
    transform: Transform,
    inverse: bool,
) -> Vec<Complex64> {
    let row_plan = Plan::new(width, transform, inverse);
    for row in data.chunks_exact_mut(width) {
        row_plan.run(row);
    }
    let col_plan = Plan::new(height, transform, inverse);
    let mut column = vec![Complex64::new(0.0, 0.0); height];
    for x in 0..width {
        for (y, c) in column.iter_mut().enumerate() {
            *c = data[y * width + x];
        }
        col_plan.run(&mut column);
        for (y, c) in column.iter().enumerate() {
            data[y * width + x] = *c;
        }
    }
    data
}

/// Precomputed twiddles for one axis length.
struct Plan {
    len: usize,
    radix2: bool,
    // exp(∓2πi·k/len) for k in 0..len
    twiddles: Vec<Complex64>,
}

impl Plan {
    fn new(len: usize, transform: Transform, inverse: bool) -> Self {
        let sign = if inverse { 1.0 } else { -1.0 };
        let twiddles = (0..len)
            .map(|k| Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / len as f64))
            .collect();
        Self {
            len,
            radix2: transform == Transform::Auto && len.is_power_of_two(),
            twiddles,
        }
    }

    fn run(&self, buf: &mut [Complex64]) {
        if self.radix2 {
            self.fft(buf);
        } else {
            self.direct(buf);
        }
    }

    fn direct(&self, buf: &mut [Complex64]) {
        let n = self.len;
        let input = buf.to_vec();
        for (k, out) in buf.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, x) in input.iter().enumerate() {
                acc += x * self.twiddles[(j * k) % n];
            }
            *out = acc;
        }
    }

    fn fft(&self, buf: &mut [Complex64]) {
        let n = self.len;
        if n <= 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let stride = n / size;
            for start in (0..n).step_by(size) {
                for k in 0..half {
                    let t = buf[start + k + half] * self.twiddles[k * stride];
                    let u = buf[start + k];
                    buf[start + k] = u + t;
                    buf[start + k + half] = u - t;
                }
            }
            size *= 2;
        }
    }
}

/// One representative per conjugate orbit, in row-major order.
pub fn canonical_frequencies(width: usize, height: usize) -> Vec<FreqIndex> {
    let mut out = Vec::with_capacity(canonical_count(width, height));
    for fy in 0..height {
        for fx in 0..width {
            let f = FreqIndex::new(fx, fy);
            if f.is_canonical(width, height) {
                out.push(f);
            }
        }
    }
    out
}

/// Number of conjugate orbits, `(W·H + S) / 2` with `S` self-conjugate indices.
pub fn canonical_count(width: usize, height: usize) -> usize {
    let sx = if width.is_multiple_of(2) { 2 } else { 1 };
    let sy = if height.is_multiple_of(2) { 2 } else { 1 };
    (width * height + sx * sy) / 2
}

/// Keeps the listed frequencies and their conjugate partners, zeroing the rest.
pub fn mask_spectrum(spec: &Spectrum, keep: &[FreqIndex]) -> Result<Spectrum> {
    let mut out = Spectrum::zeros(spec.width, spec.height)?;
    for &f in keep {
        f.check(spec.width, spec.height)?;
        let p = f.partner(spec.width, spec.height);
        out.set(f, spec.get(f));
        out.set(p, spec.get(p));
    }
    Ok(out)
}

/// Image built from a single frequency and its conjugate.
///
/// Evaluates the two-term inverse sum directly instead of running a full
/// inverse transform; equal to `idft2(mask_spectrum(spec, &[f]))`.
pub fn reconstruct_single(spec: &Spectrum, f: FreqIndex) -> Result<GrayImage> {
    let (w, h) = (spec.width, spec.height);
    f.check(w, h)?;
    let n = w * h;
    let p = f.partner(w, h);
    let a = spec.get(f);
    let b = if p == f { Complex64::new(0.0, 0.0) } else { spec.get(p) };
    // angle index of exp(2πi(fx·x/W + fy·y/H)), in units of 2π/(W·H)
    let unit: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect();
    let scale = 1.0 / n as f64;
    let mut pixels = Vec::with_capacity(n);
    for y in 0..h {
        let row_phase = (f.fy * y % h) * w;
        for x in 0..w {
            let k = (row_phase + (f.fx * x % w) * h) % n;
            let e = unit[k];
            pixels.push(scale * ((a * e).re + (b * e.conj()).re));
        }
    }
    GrayImage::new(w, h, pixels)
}
