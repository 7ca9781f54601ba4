// Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use ph_compress::image_io::load_prepared;
use ph_compress::GrayImage;
use rand::Rng;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/natural")
}

pub fn fixture_paths() -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "png"))
        .collect();
    paths.sort();
    paths
}

pub fn fixture(name: &str, size: usize) -> GrayImage {
    load_prepared(fixtures_dir().join(format!("{name}.png")), size).unwrap()
}

pub fn random_levels(rng: &mut impl Rng, w: usize, h: usize, levels: u32) -> GrayImage {
    GrayImage::from_fn(w, h, |_, _| rng.random_range(0..levels) as f64).unwrap()
}

/// Number of 8-connected components of `{p : I(p) ≤ t}` by flood fill.
pub fn flood_fill_components(img: &GrayImage, t: f64) -> usize {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let mut seen = vec![false; (w * h) as usize];
    let mut count = 0;
    for start in 0..(w * h) {
        if seen[start as usize] || img.pixels()[start as usize] > t {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start as usize] = true;
        while let Some(p) = stack.pop() {
            let (x, y) = (p % w, p / w);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w || ny >= h {
                        continue;
                    }
                    let q = (ny * w + nx) as usize;
                    if !seen[q] && img.pixels()[q] <= t {
                        seen[q] = true;
                        stack.push(q as i64);
                    }
                }
            }
        }
    }
    count
}

/// `V − E + F` of the union of closed unit squares `{p : I(p) ≤ t}`.
pub fn euler_characteristic(img: &GrayImage, t: f64) -> i64 {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let on = |x: i64, y: i64| x >= 0 && y >= 0 && x < w && y < h && img.get(x as usize, y as usize) <= t;
    let mut v = 0;
    for j in 0..=h {
        for i in 0..=w {
            if on(i - 1, j - 1) || on(i, j - 1) || on(i - 1, j) || on(i, j) {
                v += 1;
            }
        }
    }
    let mut e = 0;
    // horizontal edges (i, j)-(i+1, j)
    for j in 0..=h {
        for i in 0..w {
            if on(i, j - 1) || on(i, j) {
                e += 1;
            }
        }
    }
    // vertical edges (i, j)-(i, j+1)
    for j in 0..h {
        for i in 0..=w {
            if on(i - 1, j) || on(i, j) {
                e += 1;
            }
        }
    }
    let f = img.pixels().iter().filter(|&&p| p <= t).count() as i64;
    v - e + f
}

/// Persistence pairs of the same cubical complex by plain Z/2 column
/// reduction: squares carry pixel values, lower faces the minimum over
/// their cofaces. Returns `(dim, birth, death)` with zero-length pairs
/// dropped; essential deaths are `+∞`.
pub fn reduction_diagram(img: &GrayImage) -> Vec<(u8, f64, f64)> {
    let (w, h) = (img.width(), img.height());
    let pix = |x: usize, y: usize| img.get(x, y);
    // cells: vertices, horizontal edges, vertical edges, squares
    let mut dims = Vec::new();
    let mut vals = Vec::new();
    let vid = |i: usize, j: usize| j * (w + 1) + i;
    let nv = (w + 1) * (h + 1);
    let hid = |i: usize, j: usize| nv + j * w + i;
    let nh = w * (h + 1);
    let vtid = |i: usize, j: usize| nv + nh + j * (w + 1) + i;
    let nvt = (w + 1) * h;
    let sid = |x: usize, y: usize| nv + nh + nvt + y * w + x;
    let n = nv + nh + nvt + w * h;
    let mut boundary: Vec<Vec<usize>> = vec![Vec::new(); n];
    let around = |x0: i64, x1: i64, y0: i64, y1: i64| {
        let mut m = f64::INFINITY;
        for y in y0..=y1 {
            for x in x0..=x1 {
                if x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h {
                    m = m.min(pix(x as usize, y as usize));
                }
            }
        }
        m
    };
    for j in 0..=h {
        for i in 0..=w {
            dims.push(0u8);
            vals.push(around(i as i64 - 1, i as i64, j as i64 - 1, j as i64));
        }
    }
    for j in 0..=h {
        for i in 0..w {
            dims.push(1);
            vals.push(around(i as i64, i as i64, j as i64 - 1, j as i64));
            boundary[hid(i, j)] = vec![vid(i, j), vid(i + 1, j)];
        }
    }
    for j in 0..h {
        for i in 0..=w {
            dims.push(1);
            vals.push(around(i as i64 - 1, i as i64, j as i64, j as i64));
            boundary[vtid(i, j)] = vec![vid(i, j), vid(i, j + 1)];
        }
    }
    for y in 0..h {
        for x in 0..w {
            dims.push(2);
            vals.push(pix(x, y));
            boundary[sid(x, y)] = vec![hid(x, y), hid(x, y + 1), vtid(x, y), vtid(x + 1, y)];
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(dims[a].cmp(&dims[b])).then(a.cmp(&b)));
    let mut pos = vec![0; n];
    for (k, &c) in order.iter().enumerate() {
        pos[c] = k;
    }
    let mut columns: Vec<Vec<usize>> = order
        .iter()
        .map(|&c| {
            let mut col: Vec<usize> = boundary[c].iter().map(|&f| pos[f]).collect();
            col.sort_unstable();
            col
        })
        .collect();
    let mut low_owner: Vec<Option<usize>> = vec![None; n];
    let mut paired = vec![false; n];
    let mut out = Vec::new();
    for j in 0..n {
        while let Some(&low) = columns[j].last() {
            match low_owner[low] {
                Some(k) => {
                    let other = columns[k].clone();
                    columns[j] = sym_diff(&columns[j], &other);
                }
                None => break,
            }
        }
        if let Some(&low) = columns[j].last() {
            low_owner[low] = Some(j);
            paired[low] = true;
            paired[j] = true;
            let (b, d) = (vals[order[low]], vals[order[j]]);
            if d > b {
                out.push((dims[order[low]], b, d));
            }
        }
    }
    for k in 0..n {
        if !paired[k] && columns[k].is_empty() {
            out.push((dims[order[k]], vals[order[k]], f64::INFINITY));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
    out
}

fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn diag(a: (f64, f64)) -> f64 {
    (a.1 - a.0) / 2.0
}

/// `(W1, bottleneck)` for one dimension by enumerating every partial
/// matching; unmatched points go to the diagonal.
pub fn brute_force(a: &[(f64, f64)], b: &[(f64, f64)]) -> (f64, f64) {
    fn go(i: usize, a: &[(f64, f64)], b: &[(f64, f64)], used: &mut Vec<bool>, sum: f64, max: f64, best: &mut (f64, f64)) {
        if i == a.len() {
            let (mut s, mut m) = (sum, max);
            for (k, &p) in b.iter().enumerate() {
                if !used[k] {
                    s += diag(p);
                    m = m.max(diag(p));
                }
            }
            best.0 = best.0.min(s);
            best.1 = best.1.min(m);
            return;
        }
        let c = diag(a[i]);
        go(i + 1, a, b, used, sum + c, max.max(c), best);
        for k in 0..b.len() {
            if !used[k] {
                used[k] = true;
                let c = linf(a[i], b[k]);
                go(i + 1, a, b, used, sum + c, max.max(c), best);
                used[k] = false;
            }
        }
    }
    let mut best = (f64::INFINITY, f64::INFINITY);
    go(0, a, b, &mut vec![false; b.len()], 0.0, 0.0, &mut best);
    best
}
