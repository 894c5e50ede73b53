use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use revloc::config::{Overrides, PipelineConfig};
use revloc::pipeline;

/// Cluster app reviews into fine-grained concerns and rank the source files
/// each one is likely to change.
#[derive(Parser)]
#[command(name = "revloc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// TOML config file; relative paths inside it resolve against its directory.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for cluster initialization [default: 42]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Fixed cluster count per category; skips bigram-based inference.
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Cutoffs for Top-k accuracy and NDCG@k, comma separated [default: 1,3,5]
    #[arg(long, global = true, value_delimiter = ',')]
    top_k: Option<Vec<usize>>,
    /// Share of variance kept by PCA, in (0, 1] [default: 0.95]
    #[arg(long, global = true)]
    pca_variance: Option<f64>,
    /// Classify unlabeled reviews by keyword cues instead of dropping them.
    #[arg(long, global = true)]
    fallback_classifier: bool,
    /// Output directory [default: from config, else ./out]
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Segment and normalize reviews into per-category token documents.
    Preprocess,
    /// Cluster each category with COP-Kmeans and report DBI.
    Cluster,
    /// Rank source files for each preprocessed document.
    Localize,
    /// Score rankings against ground truth.
    Evaluate,
    /// Run every stage in order.
    RunAll,
}

fn load_config(common: &Common) -> revloc::Result<PipelineConfig> {
    let mut cfg = match &common.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    cfg.apply(&Overrides {
        seed: common.seed,
        k: common.k,
        top_k: common.top_k.clone(),
        pca_variance: common.pca_variance,
        fallback_classifier: common.fallback_classifier.then_some(true),
        output_dir: common.output_dir.clone(),
    })?;
    Ok(cfg)
}

fn run(cli: &Cli) -> revloc::Result<()> {
    let cfg = load_config(&cli.common)?;
    match cli.command {
        Command::Preprocess => {
            let s = pipeline::preprocess(&cfg)?;
            println!(
                "{} review(s), {} informative, {} atomic sentence(s), {} dropped as too short",
                s.reviews, s.informative, s.atomic_sentences, s.dropped_short
            );
            for (cat, n) in &s.documents {
                println!("  {:<20} {n}", cat.as_str());
            }
        }
        Command::Cluster => {
            let s = pipeline::cluster(&cfg)?;
            print_clusters(&s);
        }
        Command::Localize => {
            let r = pipeline::localize(&cfg)?;
            println!("ranked files for {} document(s)", r.len());
        }
        Command::Evaluate => {
            let report = pipeline::evaluate(&cfg)?;
            print!("{}", report.render_table());
        }
        Command::RunAll => {
            let s = pipeline::run_all(&cfg)?;
            print_clusters(&s.clusters);
            println!("ranked files for {} document(s)", s.rankings);
            if let Some(report) = s.report {
                print!("{}", report.render_table());
            }
        }
    }
    Ok(())
}

fn print_clusters(s: &pipeline::ClusterSummary) {
    println!("seed {}", s.seed);
    for (cat, c) in &s.categories {
        let dbi = c.dbi.map_or("n/a".to_string(), |v| format!("{v:.4}"));
        println!(
            "  {:<20} docs {:>4}  k {:>3}  r {:>3}  DBI {dbi}",
            cat.as_str(),
            c.documents,
            c.k,
            c.components
        );
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
