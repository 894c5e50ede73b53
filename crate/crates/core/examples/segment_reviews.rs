//! Split reviews into atomic sentences, each carrying a single concern.
//!
//!     cargo run --example segment_reviews

use revloc::ingest::{Category, Review};
use revloc::segment::{segment_atomic, segment_review, SegmenterConfig};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SegmenterConfig::default();

    for sentence in [
        // Copulative conjunction joining two noun phrases: the shared
        // "I wish there was" and "for the lockscreen" go to both halves.
        "I wish there was a pattern lock feature and a camera shortcut for the lockscreen",
        // Adversative conjunction: only the part after "but" is kept.
        "This app is good, but it is lacking a key feature for anyone who uses mailing lists: Reply-To-List",
        "I wish it had audio controls, and I wish there was a camera shortcut from the lock screen",
        "Looks great but it drains battery and it crashes",
    ] {
        println!("{sentence}");
        for atom in segment_atomic(sentence, &cfg) {
            println!("  -> {atom}");
        }
    }

    let review = Review {
        id: "r42".into(),
        app_id: "demo".into(),
        text: "It freezes on start. I want dark mode and a widget!".into(),
        timestamp: None,
        category: Category::FeatureRequest,
    };
    for atom in segment_review(&review, &cfg) {
        println!("{}#{} {}", atom.review_id, atom.seq, atom.text);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("example failed");
}
