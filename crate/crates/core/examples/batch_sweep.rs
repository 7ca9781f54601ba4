//! PH vs JPEG over the bundled fixtures; writes CSV, JSON and SVG charts.
//!
//! cargo run --release --example batch_sweep -- [out_dir] [size]

use std::env;
use std::path::PathBuf;

use ph_compress::harness::{run_batch, RunConfig};

fn main() -> ph_compress::Result<()> {
    env_logger::init();
    let mut args = env::args().skip(1);
    let out_dir = args.next().map(PathBuf::from).unwrap_or_else(|| env::temp_dir().join("ph_batch"));
    let size = args.next().and_then(|s| s.parse().ok()).unwrap_or(32);

    let config = RunConfig {
        inputs: vec![PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/natural")],
        size,
        alphas: vec![0.1, 0.3, 0.5, 0.7, 0.9],
        sample: Some(4),
        seed: 1,
        out_dir,
        ..RunConfig::default()
    };
    let out = run_batch(&config)?;
    println!("images: {:?}", out.summary.images);
    println!("method alpha      W1     B    ssim   bytes");
    for g in &out.summary.groups {
        println!(
            "{:>6} {:5.2} {:7.1} {:5.1} {:7.4} {:7.0}",
            g.method.as_str(),
            g.alpha,
            g.wasserstein1.mean,
            g.bottleneck.mean,
            g.ssim.mean,
            g.file_size_bytes.mean
        );
    }
    for f in &out.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
