//! The pipeline stages behind the command-line subcommands. Every stage
//! reads its inputs from files, writes its artifacts atomically under the
//! output directory, and returns a summary.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::clustering::{cop_kmeans, infer_k, ConstraintSet, CopKmeansParams};
use crate::config::{LocalizeUnit, PipelineConfig};
use crate::error::{Error, Result};
use crate::evaluation::{dbi, evaluate as eval_rankings, EvalReport, GroundTruth};
use crate::ingest::{filter_informative, load_reviews, Category, CueMatcher};
use crate::io::{read_json, read_json_lines, write_json_lines, write_json_pretty};
use crate::localization::{load_commits, rank_files, scan_source_tree, LocalizationIndex, LocalizationRanking};
use crate::segment::{segment_review, SegmenterConfig};
use crate::textproc::{drop_short, AcronymTable, LemmaDict, StopwordList, TextNormalizer, TokenDoc};
use crate::vsm::{build_matrix, pca_reduce};

pub const CATEGORIES: [Category; 2] = [Category::FeatureRequest, Category::ProblemDiscovery];
pub const SUMMARY_FILE: &str = "cluster_summary.json";
pub const RANKINGS_FILE: &str = "rankings.json";
pub const REPORT_FILE: &str = "report.json";

pub fn tokens_path(out: &Path, category: Category) -> PathBuf {
    out.join(format!("{}.jsonl", category.as_str()))
}

pub fn clusters_path(out: &Path, category: Category) -> PathBuf {
    out.join(format!("clusters_{}.json", category.as_str()))
}

pub fn matrix_path(out: &Path, category: Category) -> PathBuf {
    out.join(format!("matrix_{}.csv", category.as_str()))
}

pub fn build_normalizer(cfg: &PipelineConfig) -> Result<TextNormalizer> {
    let p = &cfg.paths;
    let lemmas = match &p.lemmas {
        Some(path) => LemmaDict::load(path)?,
        None => LemmaDict::builtin(),
    };
    let mut stopwords = match &p.stopwords {
        Some(path) => StopwordList::load(path)?,
        None => StopwordList::builtin(),
    };
    if let Some(path) = &p.strings_resource {
        let xml = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let n = stopwords.whitelist_gui_strings(&xml);
        log::info!("{n} stopword(s) whitelisted by {}", path.display());
    }
    let acronyms = match &p.acronyms {
        Some(path) => AcronymTable::load(path)?,
        None => AcronymTable::builtin(),
    };
    Ok(TextNormalizer {
        lemmas,
        stopwords,
        acronyms,
    })
}

pub fn build_segmenter(cfg: &PipelineConfig) -> Result<SegmenterConfig> {
    let mut seg = SegmenterConfig {
        copulative: cfg.parameters.copulative.clone(),
        adversative: cfg.parameters.adversative.clone(),
        ..SegmenterConfig::default()
    };
    if let Some(path) = &cfg.paths.verbs {
        seg = seg.with_verb_file(path)?;
    }
    Ok(seg)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PreprocessSummary {
    pub reviews: usize,
    pub skipped_lines: usize,
    pub dropped_unlabeled: usize,
    pub informative: usize,
    pub atomic_sentences: usize,
    pub dropped_short: usize,
    pub documents: BTreeMap<Category, usize>,
}

/// Loads, filters, segments and normalizes the reviews, writing one
/// JSON-Lines file of token documents per category.
pub fn preprocess(cfg: &PipelineConfig) -> Result<PreprocessSummary> {
    let reviews_path = cfg.require(&cfg.paths.reviews, "reviews")?;
    let loaded = load_reviews(reviews_path)?;
    let mut summary = PreprocessSummary {
        reviews: loaded.records.len(),
        skipped_lines: loaded.skipped,
        ..Default::default()
    };
    let cues = if cfg.parameters.fallback_classifier {
        Some(CueMatcher::new(&cfg.parameters.cues)?)
    } else {
        None
    };
    let outcome = filter_informative(loaded.records, cues.as_ref());
    if outcome.dropped_unlabeled > 0 {
        log::warn!("dropped {} unlabeled review(s); enable the fallback classifier to keep them", outcome.dropped_unlabeled);
    }
    summary.dropped_unlabeled = outcome.dropped_unlabeled;
    summary.informative = outcome.kept.len();

    let segmenter = build_segmenter(cfg)?;
    let normalizer = build_normalizer(cfg)?;
    let mut docs = Vec::new();
    for review in &outcome.kept {
        for atom in segment_review(review, &segmenter) {
            docs.push(normalizer.token_doc(&atom, review.timestamp));
        }
    }
    summary.atomic_sentences = docs.len();
    let docs = drop_short(docs);
    summary.dropped_short = summary.atomic_sentences - docs.len();
    if docs.is_empty() {
        return Err(Error::InvalidInput(
            "preprocessing produced no documents with two or more tokens".into(),
        ));
    }
    for cat in CATEGORIES {
        let part: Vec<&TokenDoc> = docs.iter().filter(|d| d.category == cat).collect();
        summary.documents.insert(cat, part.len());
        write_json_lines(&tokens_path(&cfg.output_dir, cat), &part)?;
    }
    Ok(summary)
}

pub fn read_token_docs(path: &Path) -> Result<Vec<TokenDoc>> {
    let loaded = read_json_lines(path, |d: TokenDoc| Ok(d))?;
    if loaded.skipped > 0 {
        return Err(Error::format(path, format!("{} malformed token document(s)", loaded.skipped)));
    }
    Ok(loaded.records)
}

/// All preprocessed documents, categories in fixed order.
pub fn read_all_token_docs(out: &Path) -> Result<Vec<TokenDoc>> {
    let mut docs = Vec::new();
    for cat in CATEGORIES {
        let path = tokens_path(out, cat);
        if !path.exists() {
            return Err(Error::Config(format!(
                "{} is missing; run preprocess first",
                path.display()
            )));
        }
        docs.extend(read_token_docs(&path)?);
    }
    Ok(docs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteredDoc {
    pub doc_id: String,
    pub cluster: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategorySummary {
    pub documents: usize,
    pub k: usize,
    pub k_inferred: bool,
    /// Bigram phrases behind an inferred K.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phrases: Vec<String>,
    pub components: usize,
    pub explained_variance_ratio: f64,
    pub dbi: Option<f64>,
    pub iterations: usize,
    pub attempt_seed: u64,
    pub constraints: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub seed: u64,
    pub categories: BTreeMap<Category, CategorySummary>,
}

/// Clusters each category's documents and writes `clusters_<category>.json`,
/// `matrix_<category>.csv` and the run summary.
pub fn cluster(cfg: &PipelineConfig) -> Result<ClusterSummary> {
    let out = &cfg.output_dir;
    let p = &cfg.parameters;
    let constraints = match &cfg.paths.constraints {
        Some(_) => {
            let path = cfg.require(&cfg.paths.constraints, "constraints")?;
            ConstraintSet::load(path)?.close()?
        }
        None => ConstraintSet::new(),
    };
    let mut summary = ClusterSummary {
        seed: p.seed,
        categories: BTreeMap::new(),
    };
    for cat in CATEGORIES {
        let path = tokens_path(out, cat);
        if !path.exists() {
            return Err(Error::Config(format!("{} is missing; run preprocess first", path.display())));
        }
        let docs = read_token_docs(&path)?;
        if docs.is_empty() {
            log::warn!("no {} documents to cluster", cat.as_str());
            write_json_pretty(&clusters_path(out, cat), &Vec::<ClusteredDoc>::new())?;
            continue;
        }
        let ids: HashSet<&str> = docs.iter().map(|d| d.doc_id.as_str()).collect();
        let (local, dropped) = constraints.restrict_to(&ids);
        if dropped > 0 {
            log::info!("{}: {dropped} constraint pair(s) involve other documents", cat.as_str());
        }

        let (matrix, _df) = build_matrix(&docs)?;
        matrix.write_csv(&matrix_path(out, cat))?;
        let reduced = pca_reduce(&matrix, cfg.pca_target())?;

        let (k, phrases) = match p.k {
            Some(k) => (k, Vec::new()),
            None => {
                let est = infer_k(&docs, p.shared_word_rule);
                let phrases = est.phrases.iter().map(|((a, b), c)| format!("{a} {b} ({c})")).collect();
                (est.k, phrases)
            }
        };
        let params = CopKmeansParams {
            k,
            seed: p.seed,
            max_iter: p.max_iter,
            restarts: p.restarts,
        };
        let assignment = cop_kmeans(&reduced, &local, &params)?;
        let dbi = if k >= 2 {
            match dbi(&reduced, &assignment) {
                Ok(v) => Some(v),
                Err(e) => {
                    log::warn!("{}: DBI undefined: {e}", cat.as_str());
                    None
                }
            }
        } else {
            None
        };

        let rows: Vec<ClusteredDoc> = docs
            .iter()
            .zip(&assignment.labels)
            .map(|(d, &c)| ClusteredDoc {
                doc_id: d.doc_id.clone(),
                cluster: c,
                text: d.text.clone(),
            })
            .collect();
        write_json_pretty(&clusters_path(out, cat), &rows)?;

        let kept: f64 = reduced.explained_variance.iter().sum();
        summary.categories.insert(
            cat,
            CategorySummary {
                documents: docs.len(),
                k,
                k_inferred: p.k.is_none(),
                phrases,
                components: reduced.dim(),
                explained_variance_ratio: if reduced.total_variance > 0.0 {
                    kept / reduced.total_variance
                } else {
                    1.0
                },
                dbi,
                iterations: assignment.iterations,
                attempt_seed: assignment.seed,
                constraints: local.must().len() + local.cannot().len(),
            },
        );
    }
    write_json_pretty(&out.join(SUMMARY_FILE), &summary)?;
    Ok(summary)
}

/// Merges a review's atomic documents into one, keeping first-seen token
/// order.
pub fn merge_by_review(docs: &[TokenDoc]) -> Vec<TokenDoc> {
    let mut order: Vec<String> = Vec::new();
    let mut merged: BTreeMap<String, TokenDoc> = BTreeMap::new();
    for d in docs {
        match merged.get_mut(&d.review_id) {
            Some(m) => {
                m.text.push(' ');
                m.text.push_str(&d.text);
                for t in &d.tokens {
                    if !m.tokens.contains(t) {
                        m.tokens.push(t.clone());
                    }
                }
            }
            None => {
                order.push(d.review_id.clone());
                merged.insert(
                    d.review_id.clone(),
                    TokenDoc {
                        doc_id: d.review_id.clone(),
                        seq: 0,
                        ..d.clone()
                    },
                );
            }
        }
    }
    order.into_iter().map(|id| merged.remove(&id).expect("inserted")).collect()
}

/// Ranks source files for every preprocessed document (or whole review) and
/// writes `rankings.json`.
pub fn localize(cfg: &PipelineConfig) -> Result<Vec<LocalizationRanking>> {
    let tree_root = cfg.require(&cfg.paths.source_tree, "source_tree")?;
    let suffixes = &cfg.parameters.non_source_suffixes;
    let commits = match &cfg.paths.commits {
        Some(_) => {
            let load = load_commits(cfg.require(&cfg.paths.commits, "commits")?, suffixes)?;
            if load.skipped > 0 {
                log::warn!("skipped {} malformed commit line(s)", load.skipped);
            }
            load.commits
        }
        None => {
            log::warn!("no commit dump configured; files are ranked by code text only");
            Vec::new()
        }
    };
    let tree = scan_source_tree(tree_root, suffixes)?;
    let normalizer = build_normalizer(cfg)?;
    let index = LocalizationIndex::build(&tree, &commits, &normalizer);
    if index.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no source files found under {} and no committed paths",
            tree_root.display()
        )));
    }

    let atomic = read_all_token_docs(&cfg.output_dir)?;
    let queries = match cfg.parameters.localize_unit {
        LocalizeUnit::Atomic => atomic.clone(),
        LocalizeUnit::Review => merge_by_review(&atomic),
    };
    let df = index.df_table(&atomic);
    let depth = cfg.parameters.top_k.iter().copied().max().unwrap_or(0);
    let rankings: Vec<LocalizationRanking> = queries
        .iter()
        .map(|q| rank_files(q, &index.files, depth, q.timestamp, &df))
        .collect();
    write_json_pretty(&cfg.output_dir.join(RANKINGS_FILE), &rankings)?;
    Ok(rankings)
}

/// Scores `rankings.json` against the ground truth, adds DBI values from the
/// cluster summary if present, and writes `report.json`.
pub fn evaluate(cfg: &PipelineConfig) -> Result<EvalReport> {
    let truth = GroundTruth::load(cfg.require(&cfg.paths.ground_truth, "ground_truth")?)?;
    let rankings_path = cfg.output_dir.join(RANKINGS_FILE);
    if !rankings_path.exists() {
        return Err(Error::Config(format!("{} is missing; run localize first", rankings_path.display())));
    }
    let rankings: Vec<LocalizationRanking> = read_json(&rankings_path)?;
    let mut report = eval_rankings(&rankings, &truth, &cfg.parameters.top_k)?;
    let summary_path = cfg.output_dir.join(SUMMARY_FILE);
    if summary_path.exists() {
        let summary: ClusterSummary = read_json(&summary_path)?;
        for (cat, s) in summary.categories {
            if let Some(v) = s.dbi {
                report.dbi.insert(cat.as_str().to_string(), v);
            }
        }
    }
    write_json_pretty(&cfg.output_dir.join(REPORT_FILE), &report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunAllSummary {
    pub preprocess: PreprocessSummary,
    pub clusters: ClusterSummary,
    pub rankings: usize,
    /// Present when a ground-truth file is configured.
    pub report: Option<EvalReport>,
}

/// Runs every stage in order. Evaluation is skipped when no ground truth is
/// configured.
pub fn run_all(cfg: &PipelineConfig) -> Result<RunAllSummary> {
    let preprocess = preprocess(cfg)?;
    let clusters = cluster(cfg)?;
    let rankings = localize(cfg)?.len();
    let report = match cfg.paths.ground_truth {
        Some(_) => Some(evaluate(cfg)?),
        None => None,
    };
    Ok(RunAllSummary {
        preprocess,
        clusters,
        rankings,
        report,
    })
}
