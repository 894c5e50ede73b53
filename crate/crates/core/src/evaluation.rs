//! Cluster validity (Davies-Bouldin) and ranking quality (Top-k, NDCG@k).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::clustering::ClusterAssignment;
use crate::error::{Error, Result};
use crate::localization::LocalizationRanking;
use crate::vsm::ReducedDataSet;

/// Relevant file paths per review id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroundTruth(pub BTreeMap<String, BTreeSet<String>>);

impl GroundTruth {
    /// Reads `{review_id: [path, ...]}`. Entries with no non-empty path are
    /// rejected.
    pub fn load(path: &Path) -> Result<Self> {
        let truth: GroundTruth = crate::io::read_json(path)?;
        truth.validate().map_err(|m| Error::format(path, m))?;
        Ok(truth)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        for (id, paths) in &self.0 {
            if paths.is_empty() || paths.iter().any(|p| p.is_empty()) {
                return Err(format!("review {id} needs at least one non-empty path"));
            }
        }
        Ok(())
    }

    /// Relevant paths for a ranking id. An atomic-sentence id `rid#seq`
    /// falls back to its review `rid`.
    pub fn lookup(&self, id: &str) -> Option<&BTreeSet<String>> {
        self.0.get(id).or_else(|| {
            let (review, _) = id.rsplit_once('#')?;
            self.0.get(review)
        })
    }
}

/// Davies-Bouldin index of a clustering: the mean over clusters of the
/// worst `(S_i + S_j) / M_ij`, where `S` is the root-mean-square distance of
/// members to their centroid and `M` the distance between centroids.
pub fn dbi(data: &ReducedDataSet, assignment: &ClusterAssignment) -> Result<f64> {
    dbi_points(&data.points, &assignment.labels, assignment.k)
}

pub fn dbi_points(points: &[Vec<f64>], labels: &[usize], k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::Parameter(format!("DBI needs at least 2 clusters, got {k}")));
    }
    if points.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} points but {} labels",
            points.len(),
            labels.len()
        )));
    }
    let dim = points.first().map_or(0, Vec::len);
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &l) in points.iter().zip(labels) {
        if l >= k {
            return Err(Error::InvalidInput(format!("label {l} out of range for k = {k}")));
        }
        counts[l] += 1;
        for (s, v) in sums[l].iter_mut().zip(p) {
            *s += v;
        }
    }
    if let Some(c) = counts.iter().position(|&c| c == 0) {
        return Err(Error::InvalidInput(format!("cluster {c} is empty")));
    }
    let centroids: Vec<Vec<f64>> = sums
        .into_iter()
        .zip(&counts)
        .map(|(s, &c)| s.into_iter().map(|v| v / c as f64).collect())
        .collect();
    let mut scatter = vec![0.0; k];
    for (p, &l) in points.iter().zip(labels) {
        scatter[l] += crate::clustering::sq_dist(p, &centroids[l]);
    }
    for (s, &c) in scatter.iter_mut().zip(&counts) {
        *s = (*s / c as f64).sqrt();
    }
    let mut total = 0.0;
    for i in 0..k {
        let mut worst = f64::NEG_INFINITY;
        for j in (0..k).filter(|&j| j != i) {
            let m = crate::clustering::sq_dist(&centroids[i], &centroids[j]).sqrt();
            if m == 0.0 {
                return Err(Error::CoincidentCentroids { a: i.min(j), b: i.max(j) });
            }
            worst = worst.max((scatter[i] + scatter[j]) / m);
        }
        total += worst;
    }
    Ok(total / k as f64)
}

fn hit_vector(ranking: &LocalizationRanking, relevant: &BTreeSet<String>, k: usize) -> Vec<bool> {
    ranking
        .entries
        .iter()
        .take(k)
        .map(|e| relevant.contains(&e.path))
        .collect()
}

/// Share of rankings with at least one relevant file among their first `k`
/// entries. Rankings absent from `truth` are an error; see [`evaluate`] for
/// the lenient variant.
pub fn top_k_accuracy(rankings: &[LocalizationRanking], truth: &GroundTruth, k: usize) -> Result<f64> {
    if k < 1 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    if rankings.is_empty() {
        return Ok(0.0);
    }
    let mut hits = 0usize;
    for r in rankings {
        let relevant = truth
            .lookup(&r.review_id)
            .ok_or_else(|| Error::InvalidInput(format!("no ground truth for {}", r.review_id)))?;
        if hit_vector(r, relevant, k).contains(&true) {
            hits += 1;
        }
    }
    Ok(hits as f64 / rankings.len() as f64)
}

/// DCG of a binary relevance vector, positions counted from 1.
pub fn dcg(relevance: &[bool]) -> f64 {
    relevance
        .iter()
        .enumerate()
        .filter(|(_, &r)| r)
        .map(|(i, _)| 1.0 / ((i + 2) as f64).log2())
        .sum()
}

/// NDCG@k against the ideal reordering of the observed relevance vector
/// (all hits first). 0 when nothing relevant was retrieved.
pub fn ndcg_at_k(ranking: &LocalizationRanking, relevant: &BTreeSet<String>, k: usize) -> Result<f64> {
    if k < 1 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    Ok(ndcg_of(&hit_vector(ranking, relevant, k)))
}

pub fn ndcg_of(relevance: &[bool]) -> f64 {
    let mut ideal = relevance.to_vec();
    ideal.sort_by(|a, b| b.cmp(a));
    let idcg = dcg(&ideal);
    if idcg == 0.0 {
        0.0
    } else {
        dcg(relevance) / idcg
    }
}

/// Adjusted Rand index between two labelings of the same items.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings must cover the same items");
    let n = a.len();
    let pairs = |x: usize| (x * x.saturating_sub(1)) as f64 / 2.0;
    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    let mut rows: HashMap<usize, usize> = HashMap::new();
    let mut cols: HashMap<usize, usize> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&c| pairs(c)).sum();
    let row_sum: f64 = rows.values().map(|&c| pairs(c)).sum();
    let col_sum: f64 = cols.values().map(|&c| pairs(c)).sum();
    let total = pairs(n);
    if total == 0.0 {
        return 1.0;
    }
    let expected = row_sum * col_sum / total;
    let max = (row_sum + col_sum) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewRow {
    pub review_id: String,
    /// 1-based rank of the first relevant file, if any was retrieved.
    pub first_hit: Option<usize>,
    pub ndcg: BTreeMap<usize, f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// DBI per clustered category.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub dbi: BTreeMap<String, f64>,
    pub top_k: BTreeMap<usize, f64>,
    pub ndcg: BTreeMap<usize, f64>,
    pub rows: Vec<ReviewRow>,
    /// Ranking ids with no ground truth, left out of every average.
    pub excluded: Vec<String>,
}

/// Top-k and mean NDCG@k for every `k` in `ks`, skipping rankings without
/// ground truth (they are listed in `excluded`).
pub fn evaluate(rankings: &[LocalizationRanking], truth: &GroundTruth, ks: &[usize]) -> Result<EvalReport> {
    if let Some(&bad) = ks.iter().find(|&&k| k < 1) {
        return Err(Error::Parameter(format!("k must be at least 1, got {bad}")));
    }
    let (kept, excluded): (Vec<&LocalizationRanking>, Vec<&LocalizationRanking>) =
        rankings.iter().partition(|r| truth.lookup(&r.review_id).is_some());
    let excluded: Vec<String> = excluded.into_iter().map(|r| r.review_id.clone()).collect();
    for id in &excluded {
        log::warn!("no ground truth for {id}; excluded");
    }
    let mut report = EvalReport {
        excluded,
        ..Default::default()
    };
    let kept_owned: Vec<LocalizationRanking> = kept.iter().map(|r| (*r).clone()).collect();
    for &k in ks {
        report.top_k.insert(k, top_k_accuracy(&kept_owned, truth, k)?);
    }
    let mut sums: BTreeMap<usize, f64> = ks.iter().map(|&k| (k, 0.0)).collect();
    for r in &kept {
        let relevant = truth.lookup(&r.review_id).expect("partitioned on presence");
        let mut ndcg = BTreeMap::new();
        for &k in ks {
            let v = ndcg_at_k(r, relevant, k)?;
            *sums.get_mut(&k).expect("k present") += v;
            ndcg.insert(k, v);
        }
        let first_hit = r.entries.iter().position(|e| relevant.contains(&e.path)).map(|p| p + 1);
        report.rows.push(ReviewRow {
            review_id: r.review_id.clone(),
            first_hit,
            ndcg,
        });
    }
    if !kept.is_empty() {
        for (k, s) in sums {
            report.ndcg.insert(k, s / kept.len() as f64);
        }
    } else {
        for &k in ks {
            report.ndcg.insert(k, 0.0);
        }
    }
    Ok(report)
}

impl EvalReport {
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        for (cat, v) in &self.dbi {
            let _ = writeln!(out, "DBI {cat:<20} {v:.4}");
        }
        let _ = writeln!(out, "{:<8} {:>8} {:>8}", "k", "Top-k", "NDCG@k");
        for (k, top) in &self.top_k {
            let ndcg = self.ndcg.get(k).copied().unwrap_or(0.0);
            let _ = writeln!(out, "{k:<8} {top:>8.4} {ndcg:>8.4}");
        }
        let _ = writeln!(out, "evaluated {} review(s), excluded {}", self.rows.len(), self.excluded.len());
        out
    }
}
