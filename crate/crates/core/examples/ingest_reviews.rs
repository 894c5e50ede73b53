//! Load a review dump and keep the feature requests and problem reports.
//!
//!     cargo run --example ingest_reviews

use std::path::Path;

use revloc::ingest::{filter_informative, heuristic_classify, load_reviews, Category, CueMatcher, Review};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/reviews.jsonl");
    let loaded = load_reviews(&path)?;
    println!("loaded {} reviews ({} lines skipped)", loaded.records.len(), loaded.skipped);

    let cues = CueMatcher::default();
    let outcome = filter_informative(loaded.records.clone(), Some(&cues));
    for r in &outcome.kept {
        println!("  {:<18} {}", r.category.as_str(), r.text);
    }

    // Without the keyword fallback, unlabeled reviews are dropped.
    let strict = filter_informative(loaded.records, None);
    println!("without fallback: kept {}, dropped {} unlabeled", strict.kept.len(), strict.dropped_unlabeled);

    let probe = Review {
        id: "x".into(),
        app_id: "demo".into(),
        text: "I wish it had a dark theme".into(),
        timestamp: None,
        category: Category::Unlabeled,
    };
    println!("{:?} -> {:?}", probe.text, heuristic_classify(probe.clone(), &cues).category);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("example failed");
}
