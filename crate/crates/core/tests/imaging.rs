use ph_compress::image_io::{load_gray, resize, save_png, to_grayscale};
use ph_compress::image_metrics::{gaussian_smooth, mse, ssim, total_variation};
use ph_compress::{GrayImage, RgbImage};
use proptest::prelude::*;

fn image(min_side: usize, max_side: usize) -> impl Strategy<Value = GrayImage> {
    (min_side..=max_side, min_side..=max_side).prop_flat_map(|(w, h)| {
        prop::collection::vec(0.0f64..255.0, w * h).prop_map(move |v| GrayImage::new(w, h, v).unwrap())
    })
}

fn pair(min_side: usize, max_side: usize) -> impl Strategy<Value = (GrayImage, GrayImage)> {
    (min_side..=max_side, min_side..=max_side).prop_flat_map(|(w, h)| {
        let v = prop::collection::vec(0.0f64..255.0, w * h);
        (v.clone(), v).prop_map(move |(a, b)| (GrayImage::new(w, h, a).unwrap(), GrayImage::new(w, h, b).unwrap()))
    })
}

#[test]
fn png_round_trip_keeps_quantized_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.png");
    let img = GrayImage::from_fn(7, 5, |x, y| (x * 30 + y) as f64 + 0.4).unwrap();
    save_png(&img, &path).unwrap();
    let back = load_gray(&path).unwrap();
    assert_eq!(back.pixels(), img.map(|v| v.round()).unwrap().pixels());
}

#[test]
fn grayscale_weights() {
    let rgb = RgbImage::new(3, 2, vec![[255, 0, 0], [0, 255, 0], [0, 0, 255], [255, 255, 255], [0, 0, 0], [10, 10, 10]]).unwrap();
    let g = to_grayscale(&rgb).unwrap();
    let expect = [0.299 * 255.0, 0.587 * 255.0, 0.114 * 255.0, 255.0, 0.0, 10.0];
    for (a, b) in g.pixels().iter().zip(expect) {
        assert!((a - b).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mse_symmetric_and_zero_on_identity((a, b) in pair(2, 12)) {
        prop_assert_eq!(mse(&a, &b).unwrap(), mse(&b, &a).unwrap());
        prop_assert_eq!(mse(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn ssim_symmetric_and_bounded((a, b) in pair(11, 18)) {
        let (ab, ba) = (ssim(&a, &b).unwrap(), ssim(&b, &a).unwrap());
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&ab));
        prop_assert!((ssim(&a, &a).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn smoothing_keeps_mean_and_lowers_variation(img in image(2, 16), sigma in 0.3f64..3.0) {
        let s = gaussian_smooth(&img, sigma).unwrap();
        prop_assert!((s.mean() - img.mean()).abs() < 1e-9);
        prop_assert!(total_variation(&s) <= total_variation(&img) + 1e-9);
        prop_assert!(s.min() >= img.min() - 1e-9 && s.max() <= img.max() + 1e-9);
    }

    #[test]
    fn resize_stays_in_range(img in image(2, 10), w in 2usize..20, h in 2usize..20) {
        let r = resize(&img, w, h).unwrap();
        prop_assert_eq!((r.width(), r.height()), (w, h));
        prop_assert!(r.min() >= img.min() - 1e-9 && r.max() <= img.max() + 1e-9);
        prop_assert_eq!(resize(&img, img.width(), img.height()).unwrap(), img);
    }

    #[test]
    fn resize_keeps_constants(v in 0.0f64..255.0, w in 2usize..20, h in 2usize..20) {
        let c = GrayImage::constant(5, 3, v).unwrap();
        prop_assert!(resize(&c, w, h).unwrap().pixels().iter().all(|&p| (p - v).abs() < 1e-9));
    }
}
