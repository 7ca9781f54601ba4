//! Comparison runs: PH compression against JPEG over one image or a batch.
//!
//! Each `(image, alpha)` produces two [`MetricsRecord`]s. The PH arm ranks
//! the image once and retains every requested fraction from that ranking;
//! the JPEG arm encodes at [`quality_for`]`(alpha)`. MSE and SSIM compare the
//! raw reconstruction with the original; the three diagram distances use the
//! smoothed reconstruction for PH and the decoded image for JPEG, both
//! against the original's diagram.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codec;
use crate::cubical_ph::{sublevel_diagram, PersistenceDiagram};
use crate::diagram_metrics::{betti_distance, bottleneck, wasserstein1};
use crate::error::{Error, Result};
use crate::image_io::{encode_png, load_prepared, GrayImage};
use crate::image_metrics::{gaussian_smooth, mse, ssim};
use crate::jpeg_baseline::{jpeg_roundtrip, quality_for};
use crate::pipeline::{check_alpha, decompress, FrequencyScore, Parallelism, Ranking, DEFAULT_SIGMA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Method {
    #[serde(rename = "PH")]
    Ph,
    #[serde(rename = "JPEG")]
    Jpeg,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ph => "PH",
            Method::Jpeg => "JPEG",
        }
    }
}

/// One evaluation row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsRecord {
    pub image: String,
    pub method: Method,
    pub alpha: f64,
    /// JPEG quality used for this row; `None` on PH rows.
    pub quality: Option<u8>,
    pub mse: f64,
    pub ssim: f64,
    pub wasserstein1: f64,
    pub bottleneck: f64,
    pub betti_distance: f64,
    /// Deflated `PHC1` container for PH, JPEG stream length for JPEG.
    pub file_size_bytes: usize,
    /// 8-bit PNG of the PH reconstruction; `None` on JPEG rows.
    pub recon_png_bytes: Option<usize>,
    pub wall_time_ms: f64,
}

pub const CSV_HEADER: [&str; 11] = [
    "image",
    "method",
    "alpha",
    "quality",
    "mse",
    "ssim",
    "wasserstein1",
    "bottleneck",
    "betti_distance",
    "file_size_bytes",
    "recon_png_bytes",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    /// Square side images are resized to.
    pub size: usize,
    pub alphas: Vec<f64>,
    pub sigma: f64,
    /// Number of images drawn from the inputs; `None` keeps all of them.
    pub sample: Option<usize>,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
    pub plots: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            inputs: Vec::new(),
            size: 128,
            alphas: default_alphas(),
            sigma: DEFAULT_SIGMA,
            sample: None,
            seed: 0,
            out_dir: PathBuf::from("out"),
            threads: 0,
            plots: true,
        }
    }
}

/// `0.05, 0.10, …, 0.95`.
pub fn default_alphas() -> Vec<f64> {
    (1..=19).map(|i| i as f64 * 0.05).map(|a| (a * 100.0).round() / 100.0).collect()
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(Error::param("alphas", "at least one retention fraction is required"));
        }
        for &a in &self.alphas {
            check_alpha(a)?;
        }
        if self.size < 11 {
            return Err(Error::param("size", "images must be at least 11x11 for SSIM"));
        }
        if self.sample == Some(0) {
            return Err(Error::param("sample", "sample count must be at least 1"));
        }
        if self.sigma.is_nan() || self.sigma < 0.0 {
            return Err(Error::param("sigma", "must be non-negative"));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::param("threads", e.to_string()))
    }
}

/// Loads, prepares and evaluates one image file.
pub fn run_single(path: &Path, config: &RunConfig) -> Result<Vec<MetricsRecord>> {
    config.validate()?;
    let img = load_prepared(path, config.size)?;
    let id = image_id(path);
    config.pool()?.install(|| evaluate_image(&id, &img, &config.alphas, config.sigma))
}

fn image_id(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

struct DiagramScores {
    w1: f64,
    bottleneck: f64,
    betti: f64,
}

fn diagram_scores(reference: &PersistenceDiagram, other: &PersistenceDiagram) -> Result<DiagramScores> {
    Ok(DiagramScores {
        w1: wasserstein1(reference, other),
        bottleneck: bottleneck(reference, other),
        betti: betti_distance(reference, other, 1.0)?,
    })
}

/// Evaluates an already prepared image at every retention fraction.
pub fn evaluate_image(id: &str, img: &GrayImage, alphas: &[f64], sigma: f64) -> Result<Vec<MetricsRecord>> {
    let start = Instant::now();
    let ranking = Ranking::compute(img, Parallelism::Rayon);
    let ranking_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut records = evaluate_ranked(id, img, &ranking, alphas, sigma)?;
    for r in records.iter_mut().filter(|r| r.method == Method::Ph) {
        r.wall_time_ms += ranking_ms;
    }
    Ok(records)
}

/// Like [`evaluate_image`] but reuses a ranking of `img`; wall times exclude
/// the ranking itself.
pub fn evaluate_ranked(
    id: &str,
    img: &GrayImage,
    ranking: &Ranking,
    alphas: &[f64],
    sigma: f64,
) -> Result<Vec<MetricsRecord>> {
    let original = sublevel_diagram(img);
    let mut records = Vec::with_capacity(2 * alphas.len());
    for &alpha in alphas {
        let start = Instant::now();
        let compressed = ranking.retain(alpha)?;
        let recon = decompress(&compressed);
        let smoothed = gaussian_smooth(&recon, sigma)?;
        let scores = diagram_scores(&original, &sublevel_diagram(&smoothed))?;
        let file_size_bytes = codec::pack(&compressed).len();
        records.push(MetricsRecord {
            image: id.to_string(),
            method: Method::Ph,
            alpha,
            quality: None,
            mse: mse(img, &recon)?,
            ssim: ssim(img, &recon)?,
            wasserstein1: scores.w1,
            bottleneck: scores.bottleneck,
            betti_distance: scores.betti,
            file_size_bytes,
            recon_png_bytes: Some(encode_png(&recon)?.len()),
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        });

        let start = Instant::now();
        let quality = quality_for(alpha)?;
        let jpeg = jpeg_roundtrip(img, quality)?;
        let scores = diagram_scores(&original, &sublevel_diagram(&jpeg.decoded))?;
        records.push(MetricsRecord {
            image: id.to_string(),
            method: Method::Jpeg,
            alpha,
            quality: Some(quality),
            mse: mse(img, &jpeg.decoded)?,
            ssim: ssim(img, &jpeg.decoded)?,
            wasserstein1: scores.w1,
            bottleneck: scores.bottleneck,
            betti_distance: scores.betti,
            file_size_bytes: jpeg.encoded_size,
            recon_png_bytes: None,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    Ok(records)
}

/// Writes records as CSV with the fixed [`CSV_HEADER`] columns.
///
/// Wall times are left out so identical runs produce identical bytes; see
/// [`write_timings_csv`].
pub fn write_metrics_csv<W: Write>(records: &[MetricsRecord], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(CSV_HEADER)?;
    for r in records {
        wtr.write_record([
            r.image.clone(),
            r.method.as_str().to_string(),
            r.alpha.to_string(),
            r.quality.map(|q| q.to_string()).unwrap_or_default(),
            r.mse.to_string(),
            r.ssim.to_string(),
            r.wasserstein1.to_string(),
            r.bottleneck.to_string(),
            r.betti_distance.to_string(),
            r.file_size_bytes.to_string(),
            r.recon_png_bytes.map(|b| b.to_string()).unwrap_or_default(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_timings_csv<W: Write>(records: &[MetricsRecord], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["image", "method", "alpha", "wall_time_ms"])?;
    for r in records {
        wtr.write_record([
            r.image.clone(),
            r.method.as_str().to_string(),
            r.alpha.to_string(),
            format!("{:.3}", r.wall_time_ms),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Ranked score table as CSV (`rank,fx,fy,w1,weight,score`).
pub fn write_scores_csv<W: Write>(scores: &[FrequencyScore], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["rank", "fx", "fy", "w1", "weight", "score"])?;
    for (rank, s) in scores.iter().enumerate() {
        wtr.write_record([
            rank.to_string(),
            s.freq.fx.to_string(),
            s.freq.fy.to_string(),
            s.w1.to_string(),
            s.weight.to_string(),
            s.score.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub median: f64,
}

impl Stat {
    fn of(values: &mut [f64]) -> Self {
        values.sort_by(f64::total_cmp);
        let n = values.len();
        let median = if n % 2 == 1 {
            values[n / 2]
        } else {
            (values[n / 2 - 1] + values[n / 2]) / 2.0
        };
        Self {
            mean: values.iter().sum::<f64>() / n as f64,
            median,
        }
    }
}

/// Aggregate over all images for one `(method, alpha)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupSummary {
    pub method: Method,
    pub alpha: f64,
    pub count: usize,
    pub mse: Stat,
    pub ssim: Stat,
    pub wasserstein1: Stat,
    pub bottleneck: Stat,
    pub betti_distance: Stat,
    pub file_size_bytes: Stat,
}

type Accessor = fn(&MetricsRecord) -> f64;

/// Metric accessors in chart order.
pub const METRICS: [(&str, Accessor); 6] = [
    ("mse", |r| r.mse),
    ("ssim", |r| r.ssim),
    ("wasserstein1", |r| r.wasserstein1),
    ("bottleneck", |r| r.bottleneck),
    ("betti_distance", |r| r.betti_distance),
    ("file_size_bytes", |r| r.file_size_bytes as f64),
];

pub fn summarize(records: &[MetricsRecord]) -> Vec<GroupSummary> {
    // alpha keyed by its bit pattern keeps grouping exact
    let mut groups: BTreeMap<(Method, u64), Vec<&MetricsRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.method, r.alpha.to_bits())).or_default().push(r);
    }
    let mut out: Vec<GroupSummary> = groups
        .into_iter()
        .map(|((method, bits), rows)| {
            let stat = |f: fn(&MetricsRecord) -> f64| Stat::of(&mut rows.iter().map(|r| f(r)).collect::<Vec<_>>());
            GroupSummary {
                method,
                alpha: f64::from_bits(bits),
                count: rows.len(),
                mse: stat(METRICS[0].1),
                ssim: stat(METRICS[1].1),
                wasserstein1: stat(METRICS[2].1),
                bottleneck: stat(METRICS[3].1),
                betti_distance: stat(METRICS[4].1),
                file_size_bytes: stat(METRICS[5].1),
            }
        })
        .collect();
    out.sort_by(|a, b| a.method.cmp(&b.method).then(a.alpha.total_cmp(&b.alpha)));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchSummary {
    pub images: Vec<String>,
    pub skipped: Vec<String>,
    pub size: usize,
    pub sigma: f64,
    pub seed: u64,
    pub groups: Vec<GroupSummary>,
}

#[derive(Clone, Debug)]
pub struct BatchOutput {
    pub records: Vec<MetricsRecord>,
    pub summary: BatchSummary,
    pub files: Vec<PathBuf>,
}

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "jpg" | "jpeg"))
        .unwrap_or(false)
}

fn collect_dir(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            collect_dir(&path, out)?;
        } else if is_image(&path) {
            out.push(path);
        }
    }
    Ok(())
}

/// Image files named by `inputs`, directories expanded recursively, sorted.
pub fn discover_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            collect_dir(input, &mut files)?;
        } else {
            files.push(input.clone());
        }
    }
    files.sort();
    files.dedup();
    Ok(files)
}

/// Seeded subsample, returned in path order.
pub fn sample_inputs(files: &[PathBuf], sample: Option<usize>, seed: u64) -> Vec<PathBuf> {
    match sample {
        Some(k) if k < files.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked: Vec<PathBuf> = files.choose_multiple(&mut rng, k).cloned().collect();
            picked.sort();
            picked
        }
        _ => files.to_vec(),
    }
}

/// Evaluates every selected image and writes `metrics.csv`, `timings.csv`,
/// `summary.json` and (optionally) one SVG chart per metric under `out_dir`.
pub fn run_batch(config: &RunConfig) -> Result<BatchOutput> {
    config.validate()?;
    let files = sample_inputs(&discover_inputs(&config.inputs)?, config.sample, config.seed);
    if files.is_empty() {
        return Err(Error::EmptyInput);
    }
    let pool = config.pool()?;
    let results: Vec<(String, Result<Vec<MetricsRecord>>)> = pool.install(|| {
        files
            .par_iter()
            .map(|path| {
                let id = image_id(path);
                let res = load_prepared(path, config.size)
                    .and_then(|img| evaluate_image(&id, &img, &config.alphas, config.sigma));
                (path.display().to_string(), res)
            })
            .collect()
    });

    let mut records = Vec::new();
    let mut images = Vec::new();
    let mut skipped = Vec::new();
    for (name, res) in results {
        match res {
            Ok(mut rows) => {
                images.push(name);
                records.append(&mut rows);
            }
            Err(e) => {
                log::warn!("skipping {name}: {e}");
                skipped.push(name);
            }
        }
    }
    if images.is_empty() {
        return Err(Error::EmptyInput);
    }

    std::fs::create_dir_all(&config.out_dir)?;
    let mut written = Vec::new();
    let path = config.out_dir.join("metrics.csv");
    write_metrics_csv(&records, std::fs::File::create(&path)?)?;
    written.push(path);
    let path = config.out_dir.join("timings.csv");
    write_timings_csv(&records, std::fs::File::create(&path)?)?;
    written.push(path);

    let groups = summarize(&records);
    let summary = BatchSummary {
        images,
        skipped,
        size: config.size,
        sigma: config.sigma,
        seed: config.seed,
        groups,
    };
    let path = config.out_dir.join("summary.json");
    std::fs::write(&path, serde_json::to_string_pretty(&summary)?)?;
    written.push(path);

    if config.plots {
        let dir = config.out_dir.join("plots");
        std::fs::create_dir_all(&dir)?;
        for (name, _) in METRICS {
            let path = dir.join(format!("{name}.svg"));
            std::fs::write(&path, line_chart_svg(name, &summary.groups))?;
            written.push(path);
        }
    }
    Ok(BatchOutput {
        records,
        summary,
        files: written,
    })
}

fn group_metric(g: &GroupSummary, metric: &str) -> f64 {
    match metric {
        "mse" => g.mse.mean,
        "ssim" => g.ssim.mean,
        "wasserstein1" => g.wasserstein1.mean,
        "bottleneck" => g.bottleneck.mean,
        "betti_distance" => g.betti_distance.mean,
        _ => g.file_size_bytes.mean,
    }
}

/// Mean of `metric` against retained percentage, one line per method.
pub fn line_chart_svg(metric: &str, groups: &[GroupSummary]) -> String {
    const W: f64 = 480.0;
    const H: f64 = 320.0;
    const PAD: f64 = 48.0;
    type Series<'a> = (Method, &'a str, Vec<(f64, f64)>);
    let series: Vec<Series> = [(Method::Ph, "#1f77b4"), (Method::Jpeg, "#d62728")]
        .into_iter()
        .map(|(m, color)| {
            let pts = groups
                .iter()
                .filter(|g| g.method == m)
                .map(|g| (g.alpha * 100.0, group_metric(g, metric)))
                .collect();
            (m, color, pts)
        })
        .collect();
    let all = series.iter().flat_map(|s| s.2.iter());
    let (mut ymin, mut ymax) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
    if !ymin.is_finite() {
        (ymin, ymax) = (0.0, 1.0);
    }
    if ymax - ymin < 1e-12 {
        ymax = ymin + 1.0;
    }
    let sx = |x: f64| PAD + x / 100.0 * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - ymin) / (ymax - ymin) * (H - 2.0 * PAD);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{metric}</text>"#, W / 2.0);
    let _ = writeln!(
        svg,
        r#"<path d="M{PAD} {PAD} V{b} H{r}" fill="none" stroke="black"/>"#,
        b = H - PAD,
        r = W - PAD
    );
    for pct in (0..=100).step_by(20) {
        let x = sx(pct as f64);
        let _ = writeln!(svg, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{pct}%</text>"#, H - PAD + 16.0);
    }
    for i in 0..=4 {
        let v = ymin + (ymax - ymin) * i as f64 / 4.0;
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, PAD - 4.0, sy(v) + 4.0, tick(v));
    }
    for (k, (method, color, pts)) in series.iter().enumerate() {
        if !pts.is_empty() {
            let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                coords.join(" ")
            );
        }
        let ly = PAD + 14.0 * k as f64;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{ly:.1}" fill="{color}">{}</text>"#,
            W - PAD - 40.0,
            method.as_str()
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn tick(v: f64) -> String {
    if v.abs() >= 1000.0 {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.2}")
    } else {
        format!("{v:.4}")
    }
}
