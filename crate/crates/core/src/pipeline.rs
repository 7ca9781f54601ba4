//! Frequency ranking by topological contribution, retention, reconstruction.
//!
//! Every non-DC canonical frequency is rendered on its own (the frequency and
//! its conjugate), its sublevel diagram is compared with the full image's
//! diagram under Wasserstein-1, and the distance is weighted by
//! `1/√(fx² + fy²)` on the aliased frequency. DC always ranks first; the rest
//! are sorted by descending score with `(fy, fx)` as tie-break.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::codec::DecodeError;
use crate::cubical_ph::{sublevel_diagram, PersistenceDiagram};
use crate::diagram_metrics::wasserstein1;
use crate::error::{Error, Result};
use crate::image_io::GrayImage;
use crate::image_metrics::gaussian_smooth;
use crate::spectrum::{canonical_count, canonical_frequencies, dft2, idft2, reconstruct_single, FreqIndex, Spectrum};

/// Default smoothing applied to reconstructions before their diagram is taken.
pub const DEFAULT_SIGMA: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct FrequencyScore {
    pub freq: FreqIndex,
    /// W1 between the full diagram and this frequency's diagram.
    pub w1: f64,
    /// `1/radius`; infinite for DC.
    pub weight: f64,
    pub score: f64,
}

/// Retained canonical frequencies with their coefficients.
///
/// `alpha` is the effective retained fraction, `entries / #canonical`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompressedImage {
    width: usize,
    height: usize,
    entries: Vec<(FreqIndex, Complex64)>,
    alpha: f64,
}

impl CompressedImage {
    /// Validates and wraps retained entries, which must be canonical,
    /// in range, strictly increasing in `(fy, fx)` and non-empty.
    pub fn new(
        width: usize,
        height: usize,
        entries: Vec<(FreqIndex, Complex64)>,
    ) -> Result<Self, DecodeError> {
        if width < 2 || height < 2 || width > u16::MAX as usize || height > u16::MAX as usize {
            return Err(DecodeError::BadDimensions(width, height));
        }
        if entries.is_empty() {
            return Err(DecodeError::Empty);
        }
        let mut prev: Option<FreqIndex> = None;
        for &(f, x) in &entries {
            if f.fx >= width || f.fy >= height {
                return Err(DecodeError::OutOfRange {
                    index: f,
                    width,
                    height,
                });
            }
            if !f.is_canonical(width, height) {
                return Err(DecodeError::NonCanonical(f));
            }
            if !(x.re.is_finite() && x.im.is_finite()) {
                return Err(DecodeError::NonFinite(f));
            }
            if let Some(p) = prev {
                if p == f {
                    return Err(DecodeError::DuplicateIndex(f));
                }
                if p > f {
                    return Err(DecodeError::Unsorted(f));
                }
            }
            prev = Some(f);
        }
        let alpha = entries.len() as f64 / canonical_count(width, height) as f64;
        Ok(Self {
            width,
            height,
            entries,
            alpha,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn entries(&self) -> &[(FreqIndex, Complex64)] {
        &self.entries
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Copy with coefficients rounded through `f32`, as stored on disk.
    pub fn quantized(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|&(f, x)| (f, Complex64::new(x.re as f32 as f64, x.im as f32 as f64)))
            .collect();
        Self {
            entries,
            ..self.clone()
        }
    }

    /// Hermitian spectrum holding every entry and its conjugate partner.
    pub fn spectrum(&self) -> Spectrum {
        let mut spec = Spectrum::zeros(self.width, self.height).expect("validated dimensions");
        for &(f, x) in &self.entries {
            let p = f.partner(self.width, self.height);
            if p == f {
                // self-conjugate coefficients of a real image are real
                spec.set(f, Complex64::new(x.re, 0.0));
            } else {
                spec.set(f, x);
                spec.set(p, x.conj());
            }
        }
        spec
    }
}

/// Ranking fan-out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Parallelism {
    Serial,
    /// Per-frequency work on the current rayon pool.
    #[default]
    Rayon,
}

/// A ranked spectrum; retaining several fractions reuses one ranking.
#[derive(Clone, Debug)]
pub struct Ranking {
    spectrum: Spectrum,
    scores: Vec<FrequencyScore>,
}

impl Ranking {
    pub fn compute(img: &GrayImage, parallelism: Parallelism) -> Self {
        let spectrum = dft2(img);
        let scoring = without_roundoff(&spectrum, img);
        let full = sublevel_diagram(img);
        let (w, h) = (img.width(), img.height());
        let score_one = |f: FreqIndex| -> FrequencyScore {
            let single = reconstruct_single(&scoring, f).expect("canonical index in range");
            let w1 = wasserstein1(&full, &sublevel_diagram(&single));
            let weight = 1.0 / f.radius(w, h);
            FrequencyScore {
                freq: f,
                w1,
                weight,
                score: if f == FreqIndex::DC { f64::INFINITY } else { w1 * weight },
            }
        };
        let freqs = canonical_frequencies(w, h);
        let mut scores: Vec<FrequencyScore> = match parallelism {
            Parallelism::Serial => freqs.into_iter().map(score_one).collect(),
            Parallelism::Rayon => freqs.into_par_iter().map(score_one).collect(),
        };
        scores.sort_by(|a, b| {
            let dc = (b.freq == FreqIndex::DC).cmp(&(a.freq == FreqIndex::DC));
            dc.then(b.score.total_cmp(&a.score)).then(a.freq.cmp(&b.freq))
        });
        Self { spectrum, scores }
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Scores in rank order, DC first.
    pub fn scores(&self) -> &[FrequencyScore] {
        &self.scores
    }

    /// Keeps the `max(1, round(α·#canonical))` top-ranked frequencies.
    pub fn retain(&self, alpha: f64) -> Result<CompressedImage> {
        let k = retained_count(alpha, self.scores.len())?;
        let mut keep: Vec<FreqIndex> = self.scores[..k].iter().map(|s| s.freq).collect();
        keep.sort_unstable();
        let entries = keep.into_iter().map(|f| (f, self.spectrum.get(f))).collect();
        Ok(CompressedImage::new(self.spectrum.width(), self.spectrum.height(), entries)?)
    }
}

/// Copy of `spec` with coefficients at the transform's roundoff floor set to
/// zero, so that frequencies absent from the image render as flat images.
fn without_roundoff(spec: &Spectrum, img: &GrayImage) -> Spectrum {
    // every |X| is bounded by Σ|I|
    let floor = 1e-12 * img.pixels().iter().map(|v| v.abs()).sum::<f64>();
    let coeffs = spec
        .coeffs()
        .iter()
        .map(|&c| if c.norm() <= floor { Complex64::new(0.0, 0.0) } else { c })
        .collect();
    Spectrum::new(spec.width(), spec.height(), coeffs).expect("same dimensions")
}

/// `max(1, round(α·n))`, rounding half up.
pub fn retained_count(alpha: f64, n: usize) -> Result<usize> {
    check_alpha(alpha)?;
    Ok(((alpha * n as f64 + 0.5).floor() as usize).clamp(1, n))
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::param("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    Ok(())
}

pub fn rank_frequencies(img: &GrayImage) -> Vec<FrequencyScore> {
    Ranking::compute(img, Parallelism::default()).scores
}

pub fn compress(img: &GrayImage, alpha: f64) -> Result<CompressedImage> {
    check_alpha(alpha)?;
    Ranking::compute(img, Parallelism::default()).retain(alpha)
}

/// Inverse transform of the rebuilt Hermitian spectrum, unclamped.
pub fn decompress(c: &CompressedImage) -> GrayImage {
    idft2(&c.spectrum())
}

/// Diagram of the smoothed reconstruction; `sigma = 0` skips smoothing.
pub fn compressed_diagram(c: &CompressedImage, sigma: f64) -> Result<PersistenceDiagram> {
    let smoothed = gaussian_smooth(&decompress(c), sigma)?;
    Ok(sublevel_diagram(&smoothed))
}
