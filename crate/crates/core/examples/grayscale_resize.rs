//! Load an image, convert it to grayscale and resize it to a square.
//!
//! cargo run --example grayscale_resize -- [image] [size]

use std::env;
use std::path::PathBuf;

use ph_compress::image_io::{load_image, resize, save_png};

fn main() -> ph_compress::Result<()> {
    let mut args = env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/natural/astronaut.png"));
    let size: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(64);

    let gray = load_image(&path)?.into_gray()?;
    println!("{}: {}x{}, mean {:.2}", path.display(), gray.width(), gray.height(), gray.mean());

    let small = resize(&gray, size, size)?;
    println!("resized to {size}x{size}: range [{:.2}, {:.2}]", small.min(), small.max());

    let out = env::temp_dir().join("grayscale_resize.png");
    save_png(&small, &out)?;
    println!("wrote {}", out.display());
    Ok(())
}
