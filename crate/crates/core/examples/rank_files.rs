//! Rank files for one review and show how code and commit text are blended.
//!
//!     cargo run --example rank_files

use chrono::{TimeZone, Utc};
use revloc::ingest::Category;
use revloc::localization::{interpolated_sim, rank_files, CommitEntry, FilePair};
use revloc::textproc::TokenDoc;
use revloc::vsm::DfTable;

fn bag(words: &[&str]) -> revloc::localization::WordBag {
    words.iter().map(|w| (w.to_string(), 1)).collect()
}

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let mut pocket = FilePair::new("PocketDetector.java", bag(&["pocket", "detector", "proximity", "sensor"]));
    pocket.add_entry(CommitEntry {
        sha: "e9c1d42".into(),
        timestamp: Utc.with_ymd_and_hms(2021, 4, 18, 20, 10, 0).unwrap(),
        words: bag(&["pocket", "mode", "screen", "wake", "battery", "drain"]),
    });
    let clock = FilePair::new("ClockView.java", bag(&["clock", "view", "font", "size", "screen"]));
    let files = vec![pocket, clock];

    let review = TokenDoc {
        doc_id: "r13#0".into(),
        review_id: "r13".into(),
        seq: 0,
        category: Category::ProblemDiscovery,
        text: "Screen wakes up in my pocket and drains the battery".into(),
        tokens: ["screen", "wake", "pocket", "drain", "battery"].map(String::from).to_vec(),
        timestamp: Some(Utc.with_ymd_and_hms(2021, 6, 14, 22, 0, 0).unwrap()),
    };
    let df = DfTable::from_counts([
        ("screen", 6u64), ("wake", 2), ("pocket", 3), ("drain", 2), ("battery", 2),
        ("proximity", 1), ("sensor", 1), ("detector", 1), ("mode", 1), ("clock", 2),
        ("view", 1), ("font", 1), ("size", 1),
    ]);

    for f in &files {
        let s = interpolated_sim(&review, f, review.timestamp, &df);
        println!(
            "{:<22} code {:.3} commit {:.3} gamma {}/{} -> {:.3}",
            f.path, s.code_sim, s.commit_sim, s.gamma, s.len, s.score
        );
    }
    // Reviews written before the commit cannot see it.
    let early = Utc.with_ymd_and_hms(2021, 1, 1, 0, 0, 0).unwrap();
    let s = interpolated_sim(&review, &files[0], Some(early), &df);
    println!("same review dated {early}: gamma {} -> {:.3} (code only)", s.gamma, s.score);

    let ranking = rank_files(&review, &files, 0, review.timestamp, &df);
    println!("{}", serde_json::to_string_pretty(&ranking)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("example failed");
}
