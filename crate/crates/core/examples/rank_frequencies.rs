//! Rank an image's frequencies by topological contribution.
//!
//! cargo run --release --example rank_frequencies -- [image] [size]

use std::env;
use std::path::PathBuf;
use std::time::Instant;

use ph_compress::image_io::load_prepared;
use ph_compress::pipeline::{Parallelism, Ranking};

fn main() -> ph_compress::Result<()> {
    let mut args = env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/natural/coins.png"));
    let size = args.next().and_then(|s| s.parse().ok()).unwrap_or(32);
    let img = load_prepared(&path, size)?;

    let start = Instant::now();
    let ranking = Ranking::compute(&img, Parallelism::Rayon);
    println!("ranked {} frequencies in {:.2?}", ranking.scores().len(), start.elapsed());
    println!("rank   fx   fy        w1   weight     score");
    for (i, s) in ranking.scores().iter().take(12).enumerate() {
        println!("{i:>4} {:>4} {:>4} {:>9.2} {:>8.4} {:>9.3}", s.freq.fx, s.freq.fy, s.w1, s.weight, s.score);
    }
    Ok(())
}
