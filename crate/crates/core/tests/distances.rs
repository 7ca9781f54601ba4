mod common;

use ph_compress::cubical_ph::{PersistenceDiagram, PersistencePoint};
use ph_compress::diagram_metrics::{
    betti_distance, bottleneck, bottleneck_points, dense_matching, optimal_matching, wasserstein1,
    wasserstein1_points, Matching, Point,
};
use proptest::prelude::*;

fn points(max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0.0f64..100.0, 0.0f64..40.0), 0..=max)
        .prop_map(|v| v.into_iter().map(|(b, p)| (b, b + p)).collect())
}

fn integer_points(max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0u8..20, 1u8..10), 0..=max)
        .prop_map(|v| v.into_iter().map(|(b, p)| (b as f64, (b + p) as f64)).collect())
}

fn diagram() -> impl Strategy<Value = PersistenceDiagram> {
    prop::collection::vec((0u8..2, 0.0f64..200.0, 0.5f64..50.0, prop::bool::weighted(0.1)), 0..8).prop_map(|v| {
        PersistenceDiagram::new(
            v.into_iter()
                .map(|(dim, b, p, ess)| {
                    let death = if ess && dim == 0 { f64::INFINITY } else { b + p };
                    PersistencePoint::new(dim, b, death)
                })
                .collect(),
        )
    })
}

#[test]
fn brute_force_oracle_sanity() {
    // one point against nothing: half its persistence
    assert_eq!(common::brute_force(&[(0.0, 2.0)], &[]), (1.0, 1.0));
    // two nearby points: matching beats two diagonal trips
    assert_eq!(common::brute_force(&[(0.0, 10.0)], &[(1.0, 10.5)]), (1.0, 1.0));
}

#[test]
fn essential_classes_meet_at_the_cap() {
    let a = PersistenceDiagram::new(vec![PersistencePoint::new(0, 0.0, f64::INFINITY)]);
    let b = PersistenceDiagram::new(vec![PersistencePoint::new(0, 10.0, f64::INFINITY)]);
    assert_eq!(wasserstein1(&a, &b), 10.0);
    assert_eq!(bottleneck(&a, &b), 10.0);
    assert_eq!(wasserstein1(&a, &PersistenceDiagram::empty()), 127.5);
}

fn check_matching(m: &Matching, a: &[Point], b: &[Point]) -> Result<(), TestCaseError> {
    let cost = Matching::cost_of(&m.pairs, a, b);
    prop_assert!(cost.is_some(), "matching is not a valid partial bijection");
    prop_assert!((cost.unwrap() - m.total_cost).abs() < 1e-9);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn agrees_with_exhaustive_matching(a in points(4), b in points(4)) {
        let (w, bn) = common::brute_force(&a, &b);
        prop_assert!((wasserstein1_points(&a, &b) - w).abs() < 1e-9);
        prop_assert!((bottleneck_points(&a, &b) - bn).abs() < 1e-9);
    }

    #[test]
    fn exhaustive_agreement_with_ties(a in integer_points(5), b in integer_points(5)) {
        let (w, bn) = common::brute_force(&a, &b);
        prop_assert!((wasserstein1_points(&a, &b) - w).abs() < 1e-9);
        prop_assert!((bottleneck_points(&a, &b) - bn).abs() < 1e-9);
    }

    #[test]
    fn reduced_solver_matches_dense(a in points(25), b in points(25)) {
        let fast = optimal_matching(&a, &b);
        let dense = dense_matching(&a, &b);
        check_matching(&fast, &a, &b)?;
        check_matching(&dense, &a, &b)?;
        prop_assert!((fast.total_cost - dense.total_cost).abs() < 1e-7);
    }

    #[test]
    fn metric_axioms(a in diagram(), b in diagram(), c in diagram()) {
        let (ab, ba) = (wasserstein1(&a, &b), wasserstein1(&b, &a));
        prop_assert!((ab - ba).abs() < 1e-9);
        prop_assert!(wasserstein1(&a, &a).abs() < 1e-12);
        prop_assert!(ab <= wasserstein1(&a, &c) + wasserstein1(&c, &b) + 1e-9);

        let (bab, bba) = (bottleneck(&a, &b), bottleneck(&b, &a));
        prop_assert_eq!(bab, bba);
        prop_assert_eq!(bottleneck(&a, &a), 0.0);
        prop_assert!(bab <= bottleneck(&a, &c) + bottleneck(&c, &b) + 1e-9);

        prop_assert!(bab <= ab + 1e-9);
    }

    #[test]
    fn betti_distance_axioms(a in diagram(), b in diagram(), c in diagram()) {
        let ab = betti_distance(&a, &b, 1.0).unwrap();
        prop_assert!((ab - betti_distance(&b, &a, 1.0).unwrap()).abs() < 1e-9);
        prop_assert_eq!(betti_distance(&a, &a, 1.0).unwrap(), 0.0);
        prop_assert!(ab <= betti_distance(&a, &c, 1.0).unwrap() + betti_distance(&c, &b, 1.0).unwrap() + 1e-9);
    }

    #[test]
    fn dimensions_do_not_mix(a in points(4), b in points(4)) {
        let lift = |pts: &[Point], dim: u8| {
            PersistenceDiagram::new(pts.iter().map(|&(x, y)| PersistencePoint::new(dim, x, y)).collect())
        };
        let same = wasserstein1(&lift(&a, 0), &lift(&b, 0));
        let crossed = wasserstein1(&lift(&a, 0), &lift(&b, 1));
        let to_empty = |p: &[Point]| p.iter().map(|&(x, y)| (y - x) / 2.0).sum::<f64>();
        prop_assert!((crossed - to_empty(&a) - to_empty(&b)).abs() < 1e-9);
        prop_assert!(same <= crossed + 1e-9);
    }
}
