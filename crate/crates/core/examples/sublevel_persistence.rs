//! H0/H1 sublevel-set persistence of a small image, printed as CSV.

use ph_compress::cubical_ph::{betti_curve, sublevel_diagram};
use ph_compress::GrayImage;

fn main() -> ph_compress::Result<()> {
    // two basins, one of them enclosed by a ring
    #[rustfmt::skip]
    let img = GrayImage::new(6, 5, vec![
        9., 9., 9., 9., 9., 9.,
        9., 1., 1., 1., 9., 9.,
        9., 1., 6., 1., 9., 2.,
        9., 1., 1., 1., 9., 9.,
        9., 9., 9., 9., 9., 9.,
    ])?;
    let d = sublevel_diagram(&img);
    d.write_csv(std::io::stdout())?;
    for dim in [0u8, 1] {
        println!("beta_{dim} curve: {:?}", betti_curve(&d, dim));
    }
    Ok(())
}
