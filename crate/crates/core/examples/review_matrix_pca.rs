//! Build the df-weighted word-review matrix and reduce it with PCA.
//!
//!     cargo run --example review_matrix_pca

use revloc::ingest::Category;
use revloc::textproc::TokenDoc;
use revloc::vsm::{build_matrix, pca_reduce, PcaTarget};

fn doc(id: &str, tokens: &[&str]) -> TokenDoc {
    TokenDoc {
        doc_id: id.into(),
        review_id: id.into(),
        seq: 0,
        category: Category::FeatureRequest,
        text: tokens.join(" "),
        tokens: tokens.iter().map(|t| t.to_string()).collect(),
        timestamp: None,
    }
}

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let docs = vec![
        doc("a", &["dark", "theme"]),
        doc("b", &["dark", "theme", "amoled"]),
        doc("c", &["black", "theme"]),
        doc("d", &["lock", "screen", "widget"]),
        doc("e", &["lock", "screen", "clock"]),
    ];
    let (matrix, df) = build_matrix(&docs)?;
    for (w, (f, d)) in df.vocab().iter().zip(df.occurrence().iter().zip(df.df())) {
        println!("{w:<8} f={f} df={d:.3}");
    }

    for target in [PcaTarget::Variance(0.95), PcaTarget::Components(2)] {
        let reduced = pca_reduce(&matrix, target)?;
        let kept: f64 = reduced.explained_variance.iter().sum();
        println!("{target:?}: r = {}, variance kept {:.3}", reduced.dim(), kept / reduced.total_variance);
        for (id, p) in reduced.ids.iter().zip(&reduced.points) {
            let coords: Vec<String> = p.iter().map(|v| format!("{v:+.3}")).collect();
            println!("  {id} [{}]", coords.join(", "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("example failed");
}
