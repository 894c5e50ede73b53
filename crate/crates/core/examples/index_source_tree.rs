//! Index a source tree and its commit history as (code, commit) file pairs.
//!
//!     cargo run --example index_source_tree

use std::path::Path;

use revloc::localization::{default_suffixes, extract_code_parts, load_commits, scan_source_tree, LocalizationIndex};
use revloc::textproc::TextNormalizer;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let mut suffixes = default_suffixes();
    suffixes.push(".xml".into());

    let commits = load_commits(&data.join("commits.jsonl"), &suffixes)?;
    println!(
        "{} commits kept, {} touched no source file, {} malformed",
        commits.commits.len(),
        commits.non_source,
        commits.skipped
    );

    let tree = scan_source_tree(&data.join("repo"), &suffixes)?;
    let first = &tree[0];
    let parts = extract_code_parts(&first.path, &first.contents);
    println!("{}:\n  methods {:?}\n  fields {:?}\n  docs {}", first.path, parts.methods, parts.fields, parts.doc_comments.len());

    let index = LocalizationIndex::build(&tree, &commits.commits, &TextNormalizer::default());
    println!("{} files, {} only known from commits", index.files.len(), index.orphan_paths);
    for f in &index.files {
        let words: Vec<&str> = f.code_words.keys().map(String::as_str).take(8).collect();
        println!("  {:<60} {} commit(s)  {:?}", f.path, f.commit_entries.len(), words);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("example failed");
}
