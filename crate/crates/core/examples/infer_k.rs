//! Estimate the number of clusters from frequent bigram phrases.
//!
//!     cargo run --example infer_k

use revloc::clustering::{infer_k, SharedWordRule};
use revloc::ingest::Category;
use revloc::textproc::TokenDoc;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let sentences = [
        "want dark theme",
        "dark theme amoled",
        "lock screen widget",
        "lock screen clock",
        "screen turn off",
        "screen turn on",
        "camera shortcut",
        "camera shortcut lockscreen",
        "sync fail",
    ];
    let docs: Vec<TokenDoc> = sentences
        .iter()
        .enumerate()
        .map(|(i, s)| TokenDoc {
            doc_id: format!("d{i}"),
            review_id: format!("d{i}"),
            seq: 0,
            category: Category::FeatureRequest,
            text: s.to_string(),
            tokens: s.split(' ').map(String::from).collect(),
            timestamp: None,
        })
        .collect();

    for rule in [SharedWordRule::AnyWord, SharedWordRule::SameWords] {
        let est = infer_k(&docs, rule);
        println!("{rule:?}: K = {} (clamped: {})", est.k, est.clamped);
        for ((a, b), n) in &est.phrases {
            println!("  {a} {b} x{n}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("example failed");
}
