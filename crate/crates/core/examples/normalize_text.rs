//! Turn atomic sentences into normalized token documents.
//!
//!     cargo run --example normalize_text

use revloc::textproc::{drop_short, strip_noise, TextNormalizer};
use revloc::segment::AtomicSentence;
use revloc::ingest::Category;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:?}", strip_noise("Crashes!!! on Android 11 :( #fail"));

    let mut norm = TextNormalizer::default();
    let before = norm.tokens("Go back to the home screen");
    // Words that appear in the app's own UI strings are never stopwords.
    norm.stopwords
        .whitelist_gui_strings(r#"<resources><string name="nav_home">Home</string></resources>"#);
    let after = norm.tokens("Go back to the home screen");
    println!("before whitelist {before:?}, after {after:?}");

    let atoms = [
        "The notifications keep crashing the app, crashing it every time",
        "pls fix UI",
        "Nice",
    ];
    let docs: Vec<_> = atoms
        .iter()
        .enumerate()
        .map(|(i, text)| {
            let atom = AtomicSentence {
                review_id: format!("r{i}"),
                seq: 0,
                text: text.to_string(),
                category: Category::ProblemDiscovery,
            };
            norm.token_doc(&atom, None)
        })
        .collect();
    for d in &docs {
        println!("{:<4} {:?}", d.doc_id, d.tokens);
    }
    let kept = drop_short(docs);
    println!("{} document(s) have two or more tokens", kept.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("example failed");
}
