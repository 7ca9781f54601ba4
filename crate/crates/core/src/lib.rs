//! Persistent-homology-guided frequency filtration for grayscale images.
//!
//! The crate ranks the 2D DFT frequencies of an image by how much each one
//! contributes to the image's sublevel-set topology, keeps the top fraction,
//! and compares the reconstruction against a baseline JPEG encoder.
//!
//! Modules, bottom-up:
//!
//! - [`image_io`]: grayscale working images, bilinear resize, PNG/JPEG I/O
//! - [`spectrum`]: forward/inverse 2D DFT and conjugate-orbit bookkeeping
//! - [`cubical_ph`]: H0/H1 sublevel persistence of a cubical complex
//! - [`diagram_metrics`]: Wasserstein-1, bottleneck and Betti-curve distances
//! - [`image_metrics`]: MSE, SSIM and Gaussian smoothing
//! - [`pipeline`]: frequency ranking, retention and reconstruction
//! - [`codec`]: the `PHC1` binary container
//! - [`jpeg_baseline`]: the JPEG comparison arm
//! - [`harness`]: per-image and batch comparison runs, CSV/JSON/SVG output

pub mod assignment;
pub mod codec;
pub mod cubical_ph;
pub mod diagram_metrics;
mod error;
pub mod harness;
pub mod image_io;
pub mod image_metrics;
pub mod jpeg_baseline;
pub mod pipeline;
pub mod spectrum;

pub use crate::codec::DecodeError;
pub use crate::cubical_ph::{sublevel_diagram, PersistenceDiagram, PersistencePoint};
pub use crate::error::{Error, Result};
pub use crate::image_io::{GrayImage, RgbImage};
pub use crate::pipeline::{compress, decompress, rank_frequencies, CompressedImage, FrequencyScore};
pub use crate::spectrum::{dft2, idft2, FreqIndex, Spectrum};
