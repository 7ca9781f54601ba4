//! Distances between persistence diagrams.
//!
//! All distances compare homology dimensions separately. Essential classes
//! have their `+∞` death replaced by the diagram cap first. The ground metric
//! is L∞ on the (birth, death) plane, so a point's distance to the diagonal
//! is half its persistence.

use crate::assignment::{hungarian, max_matching, CostMatrix};
use crate::cubical_ph::PersistenceDiagram;
use crate::error::{Error, Result};

pub const DIMS: [u8; 2] = [0, 1];

pub type Point = (f64, f64);

#[inline]
pub fn linf(a: Point, b: Point) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

#[inline]
pub fn to_diagonal(a: Point) -> f64 {
    (a.1 - a.0) / 2.0
}

/// One side of a matched pair: a diagram point by index, or the diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Point(usize),
    Diagonal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matching {
    pub pairs: Vec<(Endpoint, Endpoint)>,
    pub total_cost: f64,
}

impl Matching {
    /// Recomputes the cost of `pairs` and checks every point is used once.
    pub fn cost_of(pairs: &[(Endpoint, Endpoint)], a: &[Point], b: &[Point]) -> Option<f64> {
        let mut used_a = vec![false; a.len()];
        let mut used_b = vec![false; b.len()];
        let mut total = 0.0;
        for &pair in pairs {
            let cost = match pair {
                (Endpoint::Point(i), Endpoint::Point(j)) => {
                    mark(&mut used_a, i)?;
                    mark(&mut used_b, j)?;
                    linf(a[i], b[j])
                }
                (Endpoint::Point(i), Endpoint::Diagonal) => {
                    mark(&mut used_a, i)?;
                    to_diagonal(a[i])
                }
                (Endpoint::Diagonal, Endpoint::Point(j)) => {
                    mark(&mut used_b, j)?;
                    to_diagonal(b[j])
                }
                (Endpoint::Diagonal, Endpoint::Diagonal) => 0.0,
            };
            total += cost;
        }
        (used_a.iter().all(|&u| u) && used_b.iter().all(|&u| u)).then_some(total)
    }
}

fn mark(used: &mut [bool], i: usize) -> Option<()> {
    if std::mem::replace(used.get_mut(i)?, true) {
        None
    } else {
        Some(())
    }
}

/// Wasserstein-1 distance summed over dimensions 0 and 1.
pub fn wasserstein1(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
    DIMS.iter()
        .map(|&k| wasserstein1_points(&d1.capped(k), &d2.capped(k)))
        .sum()
}

/// Bottleneck distance, maximized over dimensions 0 and 1.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
    DIMS.iter()
        .map(|&k| bottleneck_points(&d1.capped(k), &d2.capped(k)))
        .fold(0.0, f64::max)
}

pub fn wasserstein1_points(a: &[Point], b: &[Point]) -> f64 {
    optimal_matching(a, b).total_cost
}

/// Optimal Wasserstein-1 matching between two finite point sets.
///
/// A pair `(x, y)` with `‖x − y‖∞ ≥ δ(x) + δ(y)` can always be replaced by
/// sending both points to the diagonal, so only cheaper pairs link points.
/// Points without such a link go straight to the diagonal, and the remaining
/// linked groups are independent assignment problems, each solved exactly on
/// its augmented matrix.
pub fn optimal_matching(a: &[Point], b: &[Point]) -> Matching {
    let n1 = a.len();
    let mut groups = Groups::new(n1 + b.len());
    for (i, &x) in a.iter().enumerate() {
        let dx = to_diagonal(x);
        for (j, &y) in b.iter().enumerate() {
            if linf(x, y) < dx + to_diagonal(y) {
                groups.union(i, n1 + j);
            }
        }
    }
    let mut pairs = Vec::with_capacity(a.len() + b.len());
    let mut total = 0.0;
    for members in groups.into_groups() {
        let rows: Vec<usize> = members.iter().copied().filter(|&m| m < n1).collect();
        let cols: Vec<usize> = members.iter().filter(|&&m| m >= n1).map(|&m| m - n1).collect();
        let sub_a: Vec<Point> = rows.iter().map(|&i| a[i]).collect();
        let sub_b: Vec<Point> = cols.iter().map(|&j| b[j]).collect();
        let m = dense_matching(&sub_a, &sub_b);
        total += m.total_cost;
        pairs.extend(m.pairs.into_iter().map(|(l, r)| {
            let l = match l {
                Endpoint::Point(i) => Endpoint::Point(rows[i]),
                d => d,
            };
            let r = match r {
                Endpoint::Point(j) => Endpoint::Point(cols[j]),
                d => d,
            };
            (l, r)
        }));
    }
    Matching {
        pairs,
        total_cost: total,
    }
}

/// Optimal matching on the full augmented matrix, without any reduction.
///
/// Rows are `a` followed by the diagonal copies of `b`; columns are `b`
/// followed by the diagonal copies of `a`.
pub fn dense_matching(a: &[Point], b: &[Point]) -> Matching {
    let (n1, n2) = (a.len(), b.len());
    let n = n1 + n2;
    let finite_sum: f64 = a.iter().chain(b).map(|&p| to_diagonal(p)).sum::<f64>()
        + a.iter()
            .flat_map(|&x| b.iter().map(move |&y| linf(x, y)))
            .fold(0.0, f64::max);
    let forbidden = 2.0 * finite_sum + 1.0;
    let mut m = CostMatrix::new(n, forbidden);
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            m.set(i, j, linf(x, y));
        }
        m.set(i, n2 + i, to_diagonal(x));
    }
    for (j, &y) in b.iter().enumerate() {
        m.set(n1 + j, j, to_diagonal(y));
        for i in 0..n1 {
            m.set(n1 + j, n2 + i, 0.0);
        }
    }
    let (col_of_row, _) = hungarian(&m);
    let mut pairs = Vec::with_capacity(n);
    let mut total = 0.0;
    for (row, &col) in col_of_row.iter().enumerate() {
        let pair = match (row < n1, col < n2) {
            (true, true) => (Endpoint::Point(row), Endpoint::Point(col)),
            (true, false) => (Endpoint::Point(row), Endpoint::Diagonal),
            (false, true) => (Endpoint::Diagonal, Endpoint::Point(col)),
            (false, false) => continue,
        };
        total += m.get(row, col);
        pairs.push(pair);
    }
    Matching {
        pairs,
        total_cost: total,
    }
}

/// Bottleneck distance between two finite point sets.
///
/// Binary search over candidate costs. At threshold `t` a matching exists
/// iff the point–point edges of cost ≤ `t` admit a matching saturating every
/// point farther than `t` from the diagonal on each side; by the
/// Mendelsohn–Dulmage theorem that reduces to one saturation check per side.
pub fn bottleneck_points(a: &[Point], b: &[Point]) -> f64 {
    let upper = a
        .iter()
        .chain(b)
        .map(|&p| to_diagonal(p))
        .fold(0.0, f64::max);
    let mut candidates: Vec<f64> = vec![0.0, upper];
    candidates.extend(a.iter().chain(b).map(|&p| to_diagonal(p)));
    for &x in a {
        for &y in b {
            let c = linf(x, y);
            if c < upper {
                candidates.push(c);
            }
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // `upper` is always feasible: everything goes to the diagonal
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if bottleneck_feasible(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

fn bottleneck_feasible(a: &[Point], b: &[Point], t: f64) -> bool {
    saturates_heavy(a, b, t) && saturates_heavy(b, a, t)
}

fn saturates_heavy(side: &[Point], other: &[Point], t: f64) -> bool {
    let heavy: Vec<Point> = side.iter().copied().filter(|&p| to_diagonal(p) > t).collect();
    if heavy.len() > other.len() {
        return false;
    }
    let adj: Vec<Vec<usize>> = heavy
        .iter()
        .map(|&x| {
            other
                .iter()
                .enumerate()
                .filter(|&(_, &y)| linf(x, y) <= t)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    if adj.iter().any(|e| e.is_empty()) {
        return false;
    }
    max_matching(&adj, other.len()) == heavy.len()
}

/// L^p distance between Betti curves, summed over dimensions 0 and 1.
///
/// The integral runs from the smallest birth up to the cap (or the largest
/// finite value when that exceeds the cap); essential classes stay alive to
/// the upper end.
pub fn betti_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 || p.is_infinite() {
        return Err(Error::param("p", format!("expected finite p ≥ 1, got {p}")));
    }
    let upper = d1
        .points
        .iter()
        .chain(&d2.points)
        .flat_map(|pt| [pt.birth, pt.death])
        .filter(|v| v.is_finite())
        .fold(d1.cap.max(d2.cap), f64::max);
    Ok(DIMS
        .iter()
        .map(|&k| betti_lp(d1, d2, k, upper, p))
        .sum())
}

fn betti_lp(d1: &PersistenceDiagram, d2: &PersistenceDiagram, dim: u8, upper: f64, p: f64) -> f64 {
    // (time, delta to curve 1 minus curve 2)
    let mut events: Vec<(f64, i64)> = Vec::new();
    for (diagram, sign) in [(d1, 1i64), (d2, -1i64)] {
        for pt in diagram.in_dim(dim) {
            events.push((pt.birth, sign));
            if pt.death < upper {
                events.push((pt.death, -sign));
            }
        }
    }
    if events.is_empty() {
        return 0.0;
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut integral = 0.0;
    let mut diff = 0i64;
    let mut i = 0;
    while i < events.len() {
        let t = events[i].0;
        while i < events.len() && events[i].0 == t {
            diff += events[i].1;
            i += 1;
        }
        let next = if i < events.len() { events[i].0.min(upper) } else { upper };
        if diff != 0 && next > t {
            integral += (diff.unsigned_abs() as f64).powf(p) * (next - t);
        }
    }
    integral.powf(1.0 / p)
}

/// Grouping of matched-candidate points into independent subproblems.
struct Groups {
    parent: Vec<usize>,
}

impl Groups {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Members of each group, groups ordered by their smallest member.
    fn into_groups(mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let r = self.find(i);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(i);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical_ph::PersistencePoint;

    fn diag(points: &[(u8, f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::new(
            points
                .iter()
                .map(|&(d, b, e)| PersistencePoint::new(d, b, e))
                .collect(),
        )
    }

    #[test]
    fn identical_diagrams_are_at_zero() {
        let d = diag(&[(0, 0.0, f64::INFINITY), (0, 1.0, 5.0), (1, 2.0, 7.0)]);
        assert_eq!(wasserstein1(&d, &d), 0.0);
        assert_eq!(bottleneck(&d, &d), 0.0);
        assert_eq!(betti_distance(&d, &d, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn single_point_against_empty() {
        let d = diag(&[(0, 0.0, 2.0)]);
        let e = PersistenceDiagram::empty();
        assert_eq!(wasserstein1(&d, &e), 1.0);
        assert_eq!(bottleneck(&d, &e), 1.0);
        assert_eq!(wasserstein1_points(&[], &[]), 0.0);
        assert_eq!(bottleneck_points(&[], &[]), 0.0);
    }

    #[test]
    fn three_point_case() {
        // (0,2)->(0,2.5) costs 0.5, (1,3) to the diagonal costs 1
        let a = [(0.0, 2.0), (1.0, 3.0)];
        let b = [(0.0, 2.5)];
        assert!((wasserstein1_points(&a, &b) - 1.5).abs() < 1e-12);
        assert!((bottleneck_points(&a, &b) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimensions_do_not_cross_match() {
        let d1 = diag(&[(0, 0.0, 4.0)]);
        let d2 = diag(&[(1, 0.0, 4.0)]);
        assert_eq!(wasserstein1(&d1, &d2), 4.0);
        assert_eq!(bottleneck(&d1, &d2), 2.0);
    }

    #[test]
    fn essential_classes_use_the_cap() {
        let d1 = diag(&[(0, 0.0, f64::INFINITY)]);
        let d2 = diag(&[(0, 10.0, f64::INFINITY)]);
        assert_eq!(wasserstein1(&d1, &d2), 10.0);
        assert_eq!(wasserstein1(&d1, &PersistenceDiagram::empty()), 127.5);
    }

    #[test]
    fn reduced_matching_agrees_with_dense() {
        let mut s = 12345u64;
        let mut rnd = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) % 1000) as f64 / 20.0
        };
        for _ in 0..50 {
            let mut pts = |n: usize| -> Vec<Point> {
                (0..n)
                    .map(|_| {
                        let b = rnd();
                        (b, b + rnd() / 4.0)
                    })
                    .collect()
            };
            let a = pts(12);
            let b = pts(9);
            let fast = optimal_matching(&a, &b);
            let dense = dense_matching(&a, &b);
            assert!((fast.total_cost - dense.total_cost).abs() < 1e-9);
            let recomputed = Matching::cost_of(&fast.pairs, &a, &b).unwrap();
            assert!((recomputed - fast.total_cost).abs() < 1e-9);
        }
    }

    #[test]
    fn betti_distance_cases() {
        let d1 = diag(&[(0, 0.0, 2.0)]);
        let d2 = diag(&[(0, 0.0, 1.0)]);
        assert!((betti_distance(&d1, &d2, 1.0).unwrap() - 1.0).abs() < 1e-12);

        let d1 = diag(&[(0, 0.0, 255.0)]);
        let d2 = diag(&[(0, 5.0, 255.0)]);
        assert!((betti_distance(&d1, &d2, 1.0).unwrap() - 5.0).abs() < 1e-12);

        let d1 = diag(&[(0, 0.0, f64::INFINITY)]);
        let d2 = diag(&[(0, 5.0, f64::INFINITY)]);
        assert!((betti_distance(&d1, &d2, 1.0).unwrap() - 5.0).abs() < 1e-12);
        // p = 2 on a difference of 2 over length 1 -> sqrt(4)
        let d1 = diag(&[(0, 0.0, 1.0), (0, 0.0, 1.0)]);
        let e = PersistenceDiagram::empty();
        assert!((betti_distance(&d1, &e, 2.0).unwrap() - 2.0).abs() < 1e-12);
        assert!(betti_distance(&d1, &e, 0.5).is_err());
        assert!(betti_distance(&d1, &e, f64::NAN).is_err());
    }
}
