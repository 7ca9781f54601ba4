//! Forward and inverse 2D DFT, conjugate orbits and single-frequency images.

use ph_compress::spectrum::{canonical_count, canonical_frequencies, dft2, idft2, reconstruct_single};
use ph_compress::GrayImage;

fn main() -> ph_compress::Result<()> {
    let img = GrayImage::from_fn(16, 12, |x, y| {
        100.0 + 40.0 * (2.0 * std::f64::consts::PI * x as f64 / 16.0).cos() + (y * 3) as f64
    })?;
    let spec = dft2(&img);
    let back = idft2(&spec);
    let err = img
        .pixels()
        .iter()
        .zip(back.pixels())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("round trip max error {err:.2e}, Hermitian defect {:.2e}", spec.hermitian_defect());

    println!("{} conjugate orbits on 16x12 (128x128 has {})", canonical_count(16, 12), canonical_count(128, 128));
    let mut strongest: Vec<_> = canonical_frequencies(16, 12)
        .into_iter()
        .map(|f| (spec.get(f).norm(), f))
        .collect();
    strongest.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (mag, f) in strongest.iter().take(4) {
        let part = reconstruct_single(&spec, *f)?;
        println!("({:>2},{:>2}) |F|={mag:>9.2}  range [{:.2}, {:.2}]", f.fx, f.fy, part.min(), part.max());
    }
    Ok(())
}
