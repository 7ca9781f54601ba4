//! The JPEG comparison arm: quality mapping and rate-distortion.

use std::path::PathBuf;

use ph_compress::image_io::load_prepared;
use ph_compress::image_metrics::{mse, ssim};
use ph_compress::jpeg_baseline::{jpeg_roundtrip, quality_for};

fn main() -> ph_compress::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/natural/grass.png");
    let img = load_prepared(&path, 64)?;
    println!("alpha   q  bytes      mse    ssim");
    for alpha in [0.05, 0.2, 0.4, 0.6, 0.8, 0.95] {
        let q = quality_for(alpha)?;
        let r = jpeg_roundtrip(&img, q)?;
        println!("{alpha:5.2} {q:3} {:6} {:8.2} {:7.4}", r.encoded_size, mse(&img, &r.decoded)?, ssim(&img, &r.decoded)?);
    }
    Ok(())
}
