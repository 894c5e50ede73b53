use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::code::{extract_code_doc, SourceFile, WordBag};
use super::commits::CommitRecord;
use crate::textproc::{TextNormalizer, TokenDoc};
use crate::vsm::DfTable;

/// Words one commit attached to a file it touched.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitEntry {
    pub sha: String,
    pub timestamp: DateTime<Utc>,
    pub words: WordBag,
}

/// A file as a pair of its own text and the commit text that touched it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilePair {
    pub path: String,
    pub code_words: WordBag,
    /// Sorted by timestamp, then sha.
    pub commit_entries: Vec<CommitEntry>,
}

impl FilePair {
    pub fn new(path: impl Into<String>, code_words: WordBag) -> Self {
        FilePair {
            path: path.into(),
            code_words,
            commit_entries: Vec::new(),
        }
    }

    pub fn add_entry(&mut self, entry: CommitEntry) {
        let at = self
            .commit_entries
            .partition_point(|e| (e.timestamp, &e.sha) <= (entry.timestamp, &entry.sha));
        self.commit_entries.insert(at, entry);
    }

    /// Distinct commit words from entries strictly older than `before`, or
    /// from all entries when `before` is `None`.
    pub fn commit_words(&self, before: Option<DateTime<Utc>>) -> BTreeSet<&str> {
        self.commit_entries
            .iter()
            .filter(|e| before.is_none_or(|t| e.timestamp < t))
            .flat_map(|e| e.words.keys().map(String::as_str))
            .collect()
    }
}

/// Files ready for ranking, plus per-commit documents for the df corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationIndex {
    pub files: Vec<FilePair>,
    commit_docs: Vec<Vec<String>>,
    /// Commit paths with no matching file in the tree. They are still indexed.
    pub orphan_paths: usize,
}

impl LocalizationIndex {
    pub fn build(tree: &[SourceFile], commits: &[CommitRecord], normalizer: &TextNormalizer) -> Self {
        let mut files: BTreeMap<String, FilePair> = tree
            .iter()
            .map(|f| {
                let bag = extract_code_doc(&f.path, &f.contents, normalizer);
                (f.path.clone(), FilePair::new(f.path.clone(), bag))
            })
            .collect();
        let (orphan_paths, commit_docs) = tag_files(&mut files, commits, normalizer);
        if orphan_paths > 0 {
            log::warn!("{orphan_paths} committed path(s) are missing from the source tree");
        }
        LocalizationIndex {
            files: files.into_values().collect(),
            commit_docs,
            orphan_paths,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    /// Word weights over reviews, code documents and commit documents, each
    /// document counting a word at most once.
    pub fn df_table(&self, reviews: &[TokenDoc]) -> DfTable {
        let review_docs = reviews.iter().map(|d| d.tokens.iter().collect::<Vec<_>>());
        let code_docs = self.files.iter().map(|f| f.code_words.keys().collect::<Vec<_>>());
        let commit_docs = self.commit_docs.iter().map(|d| d.iter().collect::<Vec<_>>());
        DfTable::from_documents(review_docs.chain(code_docs).chain(commit_docs))
    }
}

/// Attaches each commit's title and description words to every path it
/// touched, creating entries for paths not in `files`. Returns the number
/// of such new paths and the distinct word list of every commit.
pub fn tag_files(
    files: &mut BTreeMap<String, FilePair>,
    commits: &[CommitRecord],
    normalizer: &TextNormalizer,
) -> (usize, Vec<Vec<String>>) {
    let mut orphans = 0;
    let mut docs = Vec::with_capacity(commits.len());
    for c in commits {
        let mut words = WordBag::new();
        for w in normalizer.token_stream(&format!("{}\n{}", c.title, c.description)) {
            *words.entry(w).or_default() += 1;
        }
        docs.push(words.keys().cloned().collect());
        let touched: BTreeSet<&String> = c.files.iter().collect();
        for path in touched {
            let pair = files.entry(path.clone()).or_insert_with(|| {
                orphans += 1;
                FilePair::new(path.clone(), WordBag::new())
            });
            pair.add_entry(CommitEntry {
                sha: c.sha.clone(),
                timestamp: c.timestamp,
                words: words.clone(),
            });
        }
    }
    (orphans, docs)
}

/// Weighted asymmetric Dice: the df mass of the shared words over the
/// smaller of the two sides' df masses. Zero when either side has no mass.
pub fn dice_sim(review: &BTreeSet<&str>, doc: &BTreeSet<&str>, df: &DfTable) -> f64 {
    // Folding from +0.0: an empty f64 `sum` is -0.0.
    let mass = |s: &BTreeSet<&str>| s.iter().fold(0.0, |acc, w| acc + df.weight(w));
    let denom = mass(review).min(mass(doc));
    if denom <= 0.0 {
        return 0.0;
    }
    let shared = review.intersection(doc).fold(0.0, |acc, w| acc + df.weight(w));
    (shared / denom).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub score: f64,
    /// Distinct review words that also occur in the eligible commit text.
    pub gamma: usize,
    /// Distinct review words.
    pub len: usize,
    pub code_sim: f64,
    pub commit_sim: f64,
}

/// Blends code and commit similarity, weighting the commit side by the share
/// of review words the file's earlier commits mention.
pub fn interpolated_sim(
    review: &TokenDoc,
    file: &FilePair,
    review_time: Option<DateTime<Utc>>,
    df: &DfTable,
) -> Similarity {
    let words: BTreeSet<&str> = review.tokens.iter().map(String::as_str).collect();
    let code: BTreeSet<&str> = file.code_words.keys().map(String::as_str).collect();
    let commits = file.commit_words(review_time);
    let len = words.len();
    let gamma = words.intersection(&commits).count();
    let code_sim = dice_sim(&words, &code, df);
    let commit_sim = dice_sim(&words, &commits, df);
    let score = if len == 0 {
        0.0
    } else {
        let g = gamma as f64 / len as f64;
        ((1.0 - g) * code_sim + g * commit_sim).clamp(0.0, 1.0)
    };
    Similarity {
        score,
        gamma,
        len,
        code_sim,
        commit_sim,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFile {
    pub path: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationRanking {
    pub review_id: String,
    /// γ of the top-ranked file.
    pub gamma: usize,
    #[serde(rename = "L")]
    pub review_len: usize,
    pub entries: Vec<RankedFile>,
}

/// Scores every file against `review`, best first (ties by path), keeping
/// the first `top_k` (all when `top_k` is 0).
pub fn rank_files(
    review: &TokenDoc,
    files: &[FilePair],
    top_k: usize,
    review_time: Option<DateTime<Utc>>,
    df: &DfTable,
) -> LocalizationRanking {
    let mut scored: Vec<(Similarity, &str)> = files
        .iter()
        .map(|f| (interpolated_sim(review, f, review_time, df), f.path.as_str()))
        .collect();
    scored.sort_by(|a, b| b.0.score.total_cmp(&a.0.score).then_with(|| a.1.cmp(b.1)));
    if top_k > 0 {
        scored.truncate(top_k);
    }
    let review_len = review.tokens.iter().collect::<BTreeSet<_>>().len();
    LocalizationRanking {
        review_id: review.doc_id.clone(),
        gamma: scored.first().map_or(0, |s| s.0.gamma),
        review_len,
        entries: scored
            .into_iter()
            .map(|(s, p)| RankedFile {
                path: p.to_string(),
                score: s.score,
            })
            .collect(),
    }
}
