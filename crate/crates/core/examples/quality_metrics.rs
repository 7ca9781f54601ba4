//! MSE, SSIM and Gaussian smoothing on a fixture image.

use std::path::PathBuf;

use ph_compress::image_io::load_prepared;
use ph_compress::image_metrics::{gaussian_smooth, mse, ssim, total_variation};

fn main() -> ph_compress::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/natural/camera.png");
    let img = load_prepared(&path, 64)?;
    println!("sigma      mse     ssim        TV");
    for sigma in [0.0, 0.5, 1.0, 2.0] {
        let s = gaussian_smooth(&img, sigma)?;
        println!("{sigma:5.1} {:8.2} {:8.4} {:9.0}", mse(&img, &s)?, ssim(&img, &s)?, total_variation(&s));
    }
    Ok(())
}
