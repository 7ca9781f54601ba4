//! Sublevel-set persistence of grayscale images.
//!
//! Pixels are the top cells of a cubical complex; every edge and vertex takes
//! the minimum intensity of the pixels it touches. Sublevel components are
//! therefore 8-connected.
//!
//! H0 comes from a union-find sweep over pixels in increasing intensity with
//! the elder rule. H1 is obtained by duality: a bounded hole of the sublevel
//! set is a 4-connected component of `{I > α}` that does not reach the image
//! border, so sweeping pixels in decreasing intensity with an extra "outside"
//! node pairs each hole's closing time with the intensity at which it fills.

use std::io::Write;

use crate::image_io::GrayImage;

/// Finite stand-in for `+∞` deaths inside distance computations.
pub const DEFAULT_CAP: f64 = 255.0;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct PersistencePoint {
    pub birth: f64,
    /// `f64::INFINITY` for essential classes.
    pub death: f64,
    pub dim: u8,
}

impl PersistencePoint {
    pub fn new(dim: u8, birth: f64, death: f64) -> Self {
        Self { birth, death, dim }
    }

    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    /// Death with `+∞` replaced by `cap`, never below the birth.
    pub fn capped_death(&self, cap: f64) -> f64 {
        if self.is_essential() {
            cap.max(self.birth)
        } else {
            self.death
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PersistenceDiagram {
    pub points: Vec<PersistencePoint>,
    pub cap: f64,
}

impl PersistenceDiagram {
    pub fn new(points: Vec<PersistencePoint>) -> Self {
        Self {
            points,
            cap: DEFAULT_CAP,
        }
    }

    pub fn empty() -> Self {
        Self::new(Vec::new())
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.cap = cap;
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn in_dim(&self, dim: u8) -> impl Iterator<Item = &PersistencePoint> + '_ {
        self.points.iter().filter(move |p| p.dim == dim)
    }

    /// `(birth, capped death)` pairs of one dimension.
    pub fn capped(&self, dim: u8) -> Vec<(f64, f64)> {
        self.in_dim(dim)
            .map(|p| (p.birth, p.capped_death(self.cap)))
            .collect()
    }

    /// Points sorted by `(dim, birth, death)`; handy for multiset comparison.
    pub fn sorted_points(&self) -> Vec<PersistencePoint> {
        let mut pts = self.points.clone();
        pts.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
        });
        pts
    }

    /// Number of points of `dim` alive at `alpha` (`birth ≤ α < death`).
    pub fn betti_at(&self, dim: u8, alpha: f64) -> usize {
        self.in_dim(dim)
            .filter(|p| p.birth <= alpha && alpha < p.death)
            .count()
    }

    /// CSV rows `dim,birth,death`, with `+inf` for essential classes.
    pub fn write_csv<W: Write>(&self, out: W) -> crate::Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["dim", "birth", "death"])?;
        for p in self.sorted_points() {
            let death = if p.is_essential() {
                "+inf".to_string()
            } else {
                p.death.to_string()
            };
            wtr.write_record([p.dim.to_string(), p.birth.to_string(), death])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Breakpoints `(α, β_dim(α))` of the right-continuous Betti step function.
///
/// The curve is 0 below the first breakpoint and holds each count until the
/// next breakpoint. Essential classes never expire.
pub fn betti_curve(diagram: &PersistenceDiagram, dim: u8) -> Vec<(f64, usize)> {
    let mut events: Vec<(f64, i64)> = Vec::new();
    for p in diagram.in_dim(dim) {
        events.push((p.birth, 1));
        if !p.is_essential() {
            events.push((p.death, -1));
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut curve: Vec<(f64, usize)> = Vec::new();
    let mut count = 0i64;
    let mut i = 0;
    while i < events.len() {
        let t = events[i].0;
        while i < events.len() && events[i].0 == t {
            count += events[i].1;
            i += 1;
        }
        if curve.last().map(|&(_, c)| c as i64) != Some(count) {
            curve.push((t, count as usize));
        }
    }
    curve
}

struct UnionFind {
    parent: Vec<usize>,
    // elder key of each root; smaller is older
    key: Vec<usize>,
}

const UNSEEN: usize = usize::MAX;

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: vec![UNSEEN; n],
            key: vec![0; n],
        }
    }

    fn add(&mut self, i: usize, key: usize) {
        self.parent[i] = i;
        self.key[i] = key;
    }

    fn seen(&self, i: usize) -> bool {
        self.parent[i] != UNSEEN
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }
}

/// H0 and H1 sublevel persistence; zero-persistence pairs are dropped.
pub fn sublevel_diagram(img: &GrayImage) -> PersistenceDiagram {
    let mut points = Vec::new();
    components(img, &mut points);
    holes(img, &mut points);
    PersistenceDiagram::new(points)
}

fn sorted_order(values: &[f64], descending: bool) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    if descending {
        order.sort_unstable_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    } else {
        order.sort_unstable_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    }
    order
}

fn components(img: &GrayImage, points: &mut Vec<PersistencePoint>) {
    let (w, h) = (img.width(), img.height());
    let values = img.pixels();
    let order = sorted_order(values, false);
    let mut uf = UnionFind::new(values.len());
    for (rank, &p) in order.iter().enumerate() {
        uf.add(p, rank);
        let v = values[p];
        let (x, y) = (p % w, p / w);
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if (dx, dy) == (0, 0) || nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let q = ny as usize * w + nx as usize;
                if !uf.seen(q) {
                    continue;
                }
                let (rp, rq) = (uf.find(p), uf.find(q));
                if rp == rq {
                    continue;
                }
                let (elder, younger) = if uf.key[rp] < uf.key[rq] { (rp, rq) } else { (rq, rp) };
                let birth = values[order[uf.key[younger]]];
                if birth < v {
                    points.push(PersistencePoint::new(0, birth, v));
                }
                uf.parent[younger] = elder;
            }
        }
    }
    points.push(PersistencePoint::new(0, values[order[0]], f64::INFINITY));
}

fn holes(img: &GrayImage, points: &mut Vec<PersistencePoint>) {
    let (w, h) = (img.width(), img.height());
    let values = img.pixels();
    let order = sorted_order(values, true);
    let outside = values.len();
    let mut uf = UnionFind::new(values.len() + 1);
    // the outside region is older than every pixel component
    uf.add(outside, 0);
    for (rank, &p) in order.iter().enumerate() {
        uf.add(p, rank + 1);
        let v = values[p];
        let (x, y) = (p % w, p / w);
        let on_border = x == 0 || y == 0 || x == w - 1 || y == h - 1;
        let mut neighbors = [UNSEEN; 5];
        if x > 0 {
            neighbors[0] = p - 1;
        }
        if x + 1 < w {
            neighbors[1] = p + 1;
        }
        if y > 0 {
            neighbors[2] = p - w;
        }
        if y + 1 < h {
            neighbors[3] = p + w;
        }
        if on_border {
            neighbors[4] = outside;
        }
        for q in neighbors {
            if q == UNSEEN || !uf.seen(q) {
                continue;
            }
            let (rp, rq) = (uf.find(p), uf.find(q));
            if rp == rq {
                continue;
            }
            let (elder, younger) = if uf.key[rp] < uf.key[rq] { (rp, rq) } else { (rq, rp) };
            // younger region's peak is where the hole fills
            let peak = values[order[uf.key[younger] - 1]];
            if v < peak {
                points.push(PersistencePoint::new(1, v, peak));
            }
            uf.parent[younger] = elder;
        }
    }
}
