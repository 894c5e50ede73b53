//! Run every stage on the bundled sample app, as `revloc run-all` does.
//!
//!     cargo run --example end_to_end [output-dir]

use std::path::{Path, PathBuf};

use revloc::config::{Overrides, PipelineConfig};
use revloc::pipeline;

pub fn run_into(out: &Path) -> Result<(), Box<dyn std::error::Error>> {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/config.toml");
    let mut cfg = PipelineConfig::load(&config)?;
    cfg.apply(&Overrides {
        output_dir: Some(out.to_path_buf()),
        ..Default::default()
    })?;

    let summary = pipeline::run_all(&cfg)?;
    let pre = &summary.preprocess;
    println!("{} reviews -> {} atomic sentences -> {:?}", pre.reviews, pre.atomic_sentences, pre.documents);
    for (cat, c) in &summary.clusters.categories {
        println!("{:<18} k={} r={} DBI={:?}", cat.as_str(), c.k, c.components, c.dbi);
    }
    if let Some(report) = &summary.report {
        print!("{}", report.render_table());
    }
    println!("artifacts in {}", out.display());
    Ok(())
}

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    run_into(dir.path())
}

#[allow(dead_code)]
fn main() {
    match std::env::args().nth(1).map(PathBuf::from) {
        Some(out) => run_into(&out).expect("example failed"),
        None => run().expect("example failed"),
    }
}
