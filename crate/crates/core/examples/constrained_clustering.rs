//! Cluster points under must-link and cannot-link constraints.
//!
//!     cargo run --example constrained_clustering

use revloc::clustering::{cop_kmeans, ConstraintSet, CopKmeansParams};
use revloc::evaluation::dbi;
use revloc::vsm::ReducedDataSet;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let points = vec![
        vec![0.0, 0.0],
        vec![0.4, 0.1],
        vec![0.2, 0.5],
        vec![5.0, 5.0],
        vec![5.3, 4.8],
        vec![4.9, 5.4],
        vec![2.6, 2.4],
    ];
    let ids: Vec<String> = (0..points.len()).map(|i| format!("p{i}")).collect();
    let data = ReducedDataSet::from_points(ids, points)?;

    let mut raw = ConstraintSet::new();
    // p6 sits between the groups; tie it to the first one.
    raw.add_must("p6", "p2")?;
    raw.add_must("p2", "p1")?;
    raw.add_cannot("p6", "p5")?;
    // Closure adds p6-p1 and lifts the cannot-link to p1-p5 and p2-p5.
    let constraints = raw.close()?;
    println!("must {:?}", constraints.must());
    println!("cannot {:?}", constraints.cannot());

    let params = CopKmeansParams::new(2, 11);
    let unconstrained = cop_kmeans(&data, &ConstraintSet::new(), &params)?;
    let constrained = cop_kmeans(&data, &constraints, &params)?;
    println!("unconstrained {:?}  DBI {:.4}", unconstrained.labels, dbi(&data, &unconstrained)?);
    println!("constrained   {:?}  DBI {:.4}", constrained.labels, dbi(&data, &constrained)?);

    // A cannot-link between identical points with k = 1 has no solution.
    let twins = ReducedDataSet::from_points(vec!["a".into(), "b".into()], vec![vec![1.0], vec![1.0]])?;
    let mut apart = ConstraintSet::new();
    apart.add_cannot("a", "b")?;
    match cop_kmeans(&twins, &apart, &CopKmeansParams::new(1, 0)) {
        Err(e) => println!("expected failure: {e}"),
        Ok(a) => println!("unexpected success: {:?}", a.labels),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("example failed");
}
