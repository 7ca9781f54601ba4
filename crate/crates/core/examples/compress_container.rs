//! Compress at several retention fractions, write PHC1 containers and
//! read them back.

use std::path::PathBuf;

use ph_compress::codec;
use ph_compress::image_io::{load_prepared, save_png};
use ph_compress::image_metrics::{mse, ssim};
use ph_compress::pipeline::{decompress, Parallelism, Ranking};

fn main() -> ph_compress::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/natural/chelsea.png");
    let img = load_prepared(&path, 32)?;
    let ranking = Ranking::compute(&img, Parallelism::Rayon);
    let dir = std::env::temp_dir();

    println!("alpha  kept  raw B  packed B     mse    ssim");
    for alpha in [0.1, 0.25, 0.5, 0.9] {
        let c = ranking.retain(alpha)?;
        let packed = codec::pack(&c);
        let file = dir.join(format!("chelsea_{alpha}.phc"));
        std::fs::write(&file, &packed)?;

        let restored = codec::unpack(&std::fs::read(&file)?)?;
        let recon = decompress(&restored);
        save_png(&recon, file.with_extension("png"))?;
        println!(
            "{alpha:5.2} {:5} {:6} {:9} {:7.2} {:7.4}",
            c.entries().len(),
            codec::encode(&c).len(),
            packed.len(),
            mse(&img, &recon)?,
            ssim(&img, &recon)?
        );
    }
    println!("containers and PNGs in {}", dir.display());
    Ok(())
}
