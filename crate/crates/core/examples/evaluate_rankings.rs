//! Score rankings with Top-k accuracy and NDCG@k, and clusters with DBI.
//!
//!     cargo run --example evaluate_rankings

use revloc::evaluation::{dbi_points, evaluate, ndcg_of, GroundTruth};
use revloc::localization::{LocalizationRanking, RankedFile};

fn ranking(id: &str, paths: &[&str]) -> LocalizationRanking {
    LocalizationRanking {
        review_id: id.into(),
        gamma: 0,
        review_len: 3,
        entries: paths
            .iter()
            .enumerate()
            .map(|(i, p)| RankedFile { path: p.to_string(), score: 1.0 - i as f64 * 0.1 })
            .collect(),
    }
}

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    // Hits at ranks 1, 3 and 5 against the ideal 1, 2, 3.
    println!("NDCG@5 of {{1,0,1,0,1}} = {:.4}", ndcg_of(&[true, false, true, false, true]));

    let truth: GroundTruth = serde_json::from_str(
        r#"{"r1": ["Theme.java"], "r2": ["Pocket.java", "Sensor.java"], "r3": ["Camera.java"]}"#,
    )?;
    let rankings = vec![
        ranking("r1#0", &["Theme.java", "Clock.java", "Camera.java"]),
        ranking("r2#0", &["Clock.java", "Sensor.java", "Pocket.java"]),
        ranking("r3#0", &["Clock.java", "Theme.java", "Pocket.java"]),
        ranking("r9#0", &["Clock.java"]),
    ];
    let report = evaluate(&rankings, &truth, &[1, 2, 3])?;
    print!("{}", report.render_table());
    println!("excluded: {:?}", report.excluded);

    let points = [vec![0.0, 0.0], vec![0.0, 2.0], vec![10.0, 0.0], vec![10.0, 2.0]];
    println!("DBI = {}", dbi_points(&points, &[0, 0, 1, 1], 2)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("example failed");
}
