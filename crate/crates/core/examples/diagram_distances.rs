//! Wasserstein-1, bottleneck and Betti-curve distances between diagrams.

use ph_compress::cubical_ph::{PersistenceDiagram, PersistencePoint};
use ph_compress::diagram_metrics::{betti_distance, bottleneck, optimal_matching, wasserstein1};

fn main() -> ph_compress::Result<()> {
    let a = PersistenceDiagram::new(vec![
        PersistencePoint::new(0, 0.0, f64::INFINITY),
        PersistencePoint::new(0, 10.0, 40.0),
        PersistencePoint::new(1, 50.0, 80.0),
    ]);
    let b = PersistenceDiagram::new(vec![
        PersistencePoint::new(0, 2.0, f64::INFINITY),
        PersistencePoint::new(0, 12.0, 35.0),
        PersistencePoint::new(1, 60.0, 61.0),
    ]);
    println!("W1        {}", wasserstein1(&a, &b));
    println!("bottleneck {}", bottleneck(&a, &b));
    println!("Betti L1  {}", betti_distance(&a, &b, 1.0)?);

    let m = optimal_matching(&a.capped(0), &b.capped(0));
    println!("H0 matching (cost {}):", m.total_cost);
    for pair in &m.pairs {
        println!("  {pair:?}");
    }
    Ok(())
}
