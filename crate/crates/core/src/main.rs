use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ph_compress::codec;
use ph_compress::diagram_metrics::{betti_distance, bottleneck, wasserstein1};
use ph_compress::harness::{self, RunConfig};
use ph_compress::image_io::{load_prepared, save_png};
use ph_compress::image_metrics::{gaussian_smooth, mse, ssim};
use ph_compress::pipeline::{decompress, Parallelism, Ranking, DEFAULT_SIGMA};
use ph_compress::{sublevel_diagram, Result};

#[derive(Parser)]
#[command(name = "ph-compress", version, about = "Topology-guided frequency compression for grayscale images")]
struct Cli {
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Rank frequencies, keep a fraction and write a PHC1 container
    Compress {
        input: PathBuf,
        #[arg(long)]
        retain: f64,
        #[arg(long, default_value_t = 128)]
        size: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write the reconstruction as PNG
        #[arg(long)]
        png: Option<PathBuf>,
    },
    /// Rebuild an image from a PHC1 container
    Decompress {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the ranked frequency table
    Rank {
        input: PathBuf,
        #[arg(long, default_value_t = 128)]
        size: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the image's persistence diagram as CSV
        #[arg(long)]
        diagram: Option<PathBuf>,
    },
    /// Distances between a reference image and a second image
    Metrics {
        reference: PathBuf,
        other: PathBuf,
        #[arg(long, default_value_t = 128)]
        size: usize,
        /// Smoothing applied to the second image before its diagram is taken
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// PH vs JPEG on one image across retention fractions
    Compare {
        input: PathBuf,
        /// Comma-separated fractions; defaults to 0.05..0.95
        #[arg(long, value_delimiter = ',')]
        retain: Vec<f64>,
        #[arg(long, default_value_t = 128)]
        size: usize,
        #[arg(long, default_value_t = DEFAULT_SIGMA)]
        sigma: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PH vs JPEG over a set of images; writes CSV, JSON and SVG charts
    Batch {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        retain: Vec<f64>,
        #[arg(long, default_value_t = 128)]
        size: usize,
        #[arg(long, default_value_t = DEFAULT_SIGMA)]
        sigma: f64,
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        no_plots: bool,
    },
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(value: &T, mut out: Box<dyn Write>) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct PairMetrics {
    mse: f64,
    ssim: f64,
    wasserstein1: f64,
    bottleneck: f64,
    betti_distance: f64,
}

fn run(cli: Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| ph_compress::Error::param("threads", e.to_string()))?;
    match cli.command {
        Command::Compress { input, retain, size, out, png } => {
            let img = load_prepared(&input, size)?;
            let c = pool.install(|| Ranking::compute(&img, Parallelism::Rayon)).retain(retain)?;
            let bytes = codec::pack(&c);
            std::fs::write(&out, &bytes)?;
            if let Some(png) = png {
                save_png(&decompress(&c), png)?;
            }
            eprintln!("{} frequencies, {} bytes -> {}", c.entries().len(), bytes.len(), out.display());
        }
        Command::Decompress { input, out } => {
            let c = codec::unpack(&std::fs::read(&input)?)?;
            save_png(&decompress(&c), &out)?;
        }
        Command::Rank { input, size, format, out, diagram } => {
            let img = load_prepared(&input, size)?;
            if let Some(path) = diagram {
                sublevel_diagram(&img).write_csv(File::create(path)?)?;
            }
            let ranking = pool.install(|| Ranking::compute(&img, Parallelism::Rayon));
            let out = output(out.as_deref())?;
            match format {
                Format::Csv => harness::write_scores_csv(ranking.scores(), out)?,
                Format::Json => write_json(&ranking.scores(), out)?,
            }
        }
        Command::Metrics { reference, other, size, sigma, format } => {
            let a = load_prepared(&reference, size)?;
            let b = load_prepared(&other, size)?;
            let da = sublevel_diagram(&a);
            let db = sublevel_diagram(&gaussian_smooth(&b, sigma)?);
            let m = PairMetrics {
                mse: mse(&a, &b)?,
                ssim: ssim(&a, &b)?,
                wasserstein1: wasserstein1(&da, &db),
                bottleneck: bottleneck(&da, &db),
                betti_distance: betti_distance(&da, &db, 1.0)?,
            };
            match format {
                Format::Csv => {
                    let mut wtr = csv::Writer::from_writer(io::stdout().lock());
                    wtr.serialize(&m)?;
                    wtr.flush()?;
                }
                Format::Json => write_json(&m, output(None)?)?,
            }
        }
        Command::Compare { input, retain, size, sigma, format, out } => {
            let mut config = RunConfig { size, sigma, threads: cli.threads, ..RunConfig::default() };
            if !retain.is_empty() {
                config.alphas = retain;
            }
            let records = harness::run_single(&input, &config)?;
            let out = output(out.as_deref())?;
            match format {
                Format::Csv => harness::write_metrics_csv(&records, out)?,
                Format::Json => write_json(&records, out)?,
            }
        }
        Command::Batch { inputs, retain, size, sigma, sample, seed, out, no_plots } => {
            let mut config = RunConfig {
                inputs,
                size,
                sigma,
                sample,
                seed,
                out_dir: out,
                threads: cli.threads,
                plots: !no_plots,
                ..RunConfig::default()
            };
            if !retain.is_empty() {
                config.alphas = retain;
            }
            let result = harness::run_batch(&config)?;
            for path in &result.files {
                eprintln!("wrote {}", path.display());
            }
            if !result.summary.skipped.is_empty() {
                eprintln!("skipped {} unreadable input(s)", result.summary.skipped.len());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
