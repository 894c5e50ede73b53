//! Word-review matrix, logarithmic document-frequency weights, and PCA.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc::TokenDoc;

/// Vocabulary with per-word total occurrence `f_w` and weight
/// `df(w) = ln(1 + f_w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DfTable {
    vocab: Vec<String>,
    occurrence: Vec<u64>,
    df: Vec<f64>,
    index: HashMap<String, usize>,
}

impl DfTable {
    /// Builds a table from `(word, count)` pairs. Counts for repeated words
    /// are summed; words with a zero total are left out.
    pub fn from_counts<I, S>(counts: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut merged: BTreeMap<String, u64> = BTreeMap::new();
        for (w, c) in counts {
            *merged.entry(w.into()).or_default() += c;
        }
        merged.retain(|_, c| *c > 0);
        let vocab: Vec<String> = merged.keys().cloned().collect();
        let occurrence: Vec<u64> = merged.values().copied().collect();
        let df = occurrence.iter().map(|&f| (f as f64).ln_1p()).collect();
        let index = vocab.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        DfTable {
            vocab,
            occurrence,
            df,
            index,
        }
    }

    /// Counts each distinct word once per document.
    pub fn from_documents<'a, D, W>(docs: D) -> Self
    where
        D: IntoIterator<Item = W>,
        W: IntoIterator<Item = &'a String>,
    {
        let mut counts: BTreeMap<&String, u64> = BTreeMap::new();
        for doc in docs {
            let distinct: std::collections::BTreeSet<&String> = doc.into_iter().collect();
            for w in distinct {
                *counts.entry(w).or_default() += 1;
            }
        }
        Self::from_counts(counts.into_iter().map(|(w, c)| (w.clone(), c)))
    }

    /// Builds a table with explicit weights. The stored occurrence of each
    /// word is `round(e^w - 1)`, the count that would give that weight.
    pub fn from_weights<I, S>(weights: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let merged: BTreeMap<String, f64> = weights.into_iter().map(|(w, v)| (w.into(), v)).collect();
        let vocab: Vec<String> = merged.keys().cloned().collect();
        let df: Vec<f64> = merged.values().copied().collect();
        let occurrence = df.iter().map(|w| w.exp_m1().round().max(0.0) as u64).collect();
        let index = vocab.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        DfTable {
            vocab,
            occurrence,
            df,
            index,
        }
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn occurrence(&self) -> &[u64] {
        &self.occurrence
    }

    pub fn df(&self) -> &[f64] {
        &self.df
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    /// Weight of `word`; words outside the vocabulary weigh `ln(1 + 0) = 0`.
    pub fn weight(&self, word: &str) -> f64 {
        self.index_of(word).map_or(0.0, |i| self.df[i])
    }

    /// Same vocabulary with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> DfTable {
        DfTable {
            df: self.df.iter().map(|d| d * factor).collect(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordReviewMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    /// Sparse `WR`: per row, `(column, count)` pairs in column order.
    pub counts: Vec<Vec<(usize, u32)>>,
    /// Dense `R = WR * df`, one row per document.
    pub scaled: DMatrix<f64>,
}

impl WordReviewMatrix {
    pub fn count(&self, row: usize, col: usize) -> u32 {
        self.counts[row]
            .binary_search_by_key(&col, |&(c, _)| c)
            .map_or(0, |i| self.counts[row][i].1)
    }

    /// Writes `R` as CSV: a `doc_id` column followed by one column per word.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::InvalidInput(format!("csv: {e}"));
        let header: Vec<&str> = std::iter::once("doc_id")
            .chain(self.cols.iter().map(String::as_str))
            .collect();
        w.write_record(&header).map_err(csv_err)?;
        for (i, id) in self.rows.iter().enumerate() {
            let mut rec = vec![id.clone()];
            rec.extend(self.scaled.row(i).iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(csv_err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
        crate::io::write_atomic(path, &bytes)
    }
}

/// Builds `WR`, the df table and `R` from token documents. The vocabulary is
/// sorted lexicographically. Every `WR` entry must be 0 or 1, which holds for
/// deduplicated token documents.
pub fn build_matrix(docs: &[TokenDoc]) -> Result<(WordReviewMatrix, DfTable)> {
    if docs.is_empty() {
        return Err(Error::InvalidInput("cannot build a matrix from zero documents".into()));
    }
    let mut totals: BTreeMap<&str, u64> = BTreeMap::new();
    for d in docs {
        for t in &d.tokens {
            *totals.entry(t.as_str()).or_default() += 1;
        }
    }
    let df = DfTable::from_counts(totals.into_iter().map(|(w, c)| (w.to_string(), c)));
    let n = df.len();
    let mut counts = Vec::with_capacity(docs.len());
    let mut scaled = DMatrix::zeros(docs.len(), n);
    for (r, d) in docs.iter().enumerate() {
        let mut row: BTreeMap<usize, u32> = BTreeMap::new();
        for t in &d.tokens {
            let c = df.index_of(t).expect("token is in vocabulary");
            *row.entry(c).or_default() += 1;
        }
        for (&c, &k) in &row {
            if k > 1 {
                return Err(Error::InvalidInput(format!(
                    "document {} repeats token {:?}; tokens must be deduplicated",
                    d.doc_id, df.vocab[c]
                )));
            }
            scaled[(r, c)] = f64::from(k) * df.df[c];
        }
        counts.push(row.into_iter().collect());
    }
    let matrix = WordReviewMatrix {
        rows: docs.iter().map(|d| d.doc_id.clone()).collect(),
        cols: df.vocab.clone(),
        counts,
        scaled,
    };
    Ok((matrix, df))
}

/// How many principal components to keep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PcaTarget {
    Components(usize),
    /// Smallest number of components whose cumulative explained variance
    /// reaches this fraction of the total.
    Variance(f64),
}

impl Default for PcaTarget {
    fn default() -> Self {
        PcaTarget::Variance(0.95)
    }
}

/// Rows projected onto the leading principal components.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDataSet {
    pub ids: Vec<String>,
    pub points: Vec<Vec<f64>>,
    pub components: Vec<Vec<f64>>,
    pub explained_variance: Vec<f64>,
    pub total_variance: f64,
    pub mean: Vec<f64>,
}

impl ReducedDataSet {
    /// Wraps raw vectors as a dataset with identity components, for callers
    /// that cluster points without a PCA step.
    pub fn from_points(ids: Vec<String>, points: Vec<Vec<f64>>) -> Result<Self> {
        if ids.len() != points.len() {
            return Err(Error::InvalidInput(format!(
                "{} ids for {} points",
                ids.len(),
                points.len()
            )));
        }
        let dim = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidInput("points have differing dimensions".into()));
        }
        let components = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Ok(ReducedDataSet {
            ids,
            points,
            components,
            explained_variance: Vec::new(),
            total_variance: 0.0,
            mean: vec![0.0; dim],
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Coordinates of an original-space vector in the reduced space.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| c.iter().zip(x.iter().zip(&self.mean)).map(|(ci, (xi, mi))| ci * (xi - mi)).sum())
            .collect()
    }

    /// Maps every reduced point back to the original space.
    pub fn reconstruct(&self) -> Vec<Vec<f64>> {
        self.points
            .iter()
            .map(|p| {
                let mut x = self.mean.clone();
                for (coef, comp) in p.iter().zip(&self.components) {
                    for (xi, ci) in x.iter_mut().zip(comp) {
                        *xi += coef * ci;
                    }
                }
                x
            })
            .collect()
    }
}

/// PCA of the scaled matrix `R`.
pub fn pca_reduce(matrix: &WordReviewMatrix, target: PcaTarget) -> Result<ReducedDataSet> {
    pca(matrix.rows.clone(), &matrix.scaled, target)
}

/// Mean-centers the rows of `data` and projects them onto the top principal
/// components. The eigendecomposition runs on whichever of the covariance
/// (`n x n`) or Gram (`m x m`) matrix is smaller.
pub fn pca(ids: Vec<String>, data: &DMatrix<f64>, target: PcaTarget) -> Result<ReducedDataSet> {
    let (m, n) = data.shape();
    if m < 2 {
        return Err(Error::Parameter(format!("PCA needs at least 2 rows, got {m}")));
    }
    if ids.len() != m {
        return Err(Error::InvalidInput(format!("{} ids for {m} rows", ids.len())));
    }
    if n == 0 {
        return Err(Error::InvalidInput("PCA needs at least one column".into()));
    }
    let available = m.min(n);
    match target {
        PcaTarget::Components(0) => {
            return Err(Error::Parameter("PCA component count must be positive".into()))
        }
        PcaTarget::Variance(v) if !(v > 0.0 && v <= 1.0) => {
            return Err(Error::Parameter(format!("variance fraction {v} outside (0, 1]")))
        }
        _ => {}
    }

    let mean: DVector<f64> = DVector::from_iterator(n, data.column_iter().map(|c| c.mean()));
    let mut centered = data.clone();
    for mut row in centered.row_iter_mut() {
        row -= mean.transpose();
    }
    let mean_vec: Vec<f64> = mean.iter().copied().collect();

    if centered.amax() < 1e-12 {
        log::warn!("PCA input has zero variance; returning a single zero component");
        let mut axis = vec![0.0; n];
        axis[0] = 1.0;
        return Ok(ReducedDataSet {
            ids,
            points: vec![vec![0.0]; m],
            components: vec![axis],
            explained_variance: vec![0.0],
            total_variance: 0.0,
            mean: mean_vec,
        });
    }

    let (variances, directions) = principal_axes(&centered);
    let total: f64 = variances.iter().sum();

    let r = match target {
        PcaTarget::Components(r) if r > available => {
            log::warn!("requested {r} components but only {available} are available; clamping");
            available
        }
        PcaTarget::Components(r) => r,
        PcaTarget::Variance(v) => {
            let mut cum = 0.0;
            let mut r = available;
            for (i, var) in variances.iter().enumerate() {
                cum += var;
                if cum >= v * total - 1e-12 * total {
                    r = i + 1;
                    break;
                }
            }
            r
        }
    };

    let basis = directions.columns(0, r).into_owned();
    let projected = &centered * &basis;
    Ok(ReducedDataSet {
        ids,
        points: projected.row_iter().map(|row| row.iter().copied().collect()).collect(),
        components: basis.column_iter().map(|c| c.iter().copied().collect()).collect(),
        explained_variance: variances[..r].to_vec(),
        total_variance: total,
        mean: mean_vec,
    })
}

/// Variances (descending, length `min(m, n)`) and matching orthonormal
/// directions as the columns of an `n x min(m, n)` matrix.
fn principal_axes(centered: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let (m, n) = centered.shape();
    let denom = (m - 1) as f64;
    let k = m.min(n);
    if n <= m {
        let cov = centered.transpose() * centered / denom;
        let eig = SymmetricEigen::new(cov);
        let order = descending_order(&eig.eigenvalues);
        let vars = order.iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
        let mut dirs = DMatrix::zeros(n, k);
        for (col, &i) in order.iter().enumerate() {
            dirs.set_column(col, &eig.eigenvectors.column(i));
        }
        (vars, dirs)
    } else {
        let gram = centered * centered.transpose() / denom;
        let eig = SymmetricEigen::new(gram);
        let order = descending_order(&eig.eigenvalues);
        let top = eig.eigenvalues[order[0]].max(0.0);
        let mut vars = Vec::with_capacity(k);
        let mut dirs: Vec<DVector<f64>> = Vec::with_capacity(k);
        for &i in &order {
            let lambda = eig.eigenvalues[i].max(0.0);
            vars.push(lambda);
            if lambda > top * 1e-12 {
                let v = centered.transpose() * eig.eigenvectors.column(i);
                dirs.push(v.normalize());
            }
        }
        complete_orthonormal(&mut dirs, n, k);
        (vars, DMatrix::from_columns(&dirs))
    }
}

fn descending_order(values: &DVector<f64>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    order
}

/// Re-orthonormalizes `dirs` with modified Gram-Schmidt and extends it with
/// standard basis vectors until it holds `k` columns.
fn complete_orthonormal(dirs: &mut Vec<DVector<f64>>, n: usize, k: usize) {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(k);
    let candidates = std::mem::take(dirs)
        .into_iter()
        .chain((0..n).map(|i| DVector::from_fn(n, |j, _| if i == j { 1.0 } else { 0.0 })));
    for mut v in candidates {
        if out.len() == k {
            break;
        }
        for _ in 0..2 {
            for u in &out {
                let proj = u.dot(&v);
                v -= u * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            out.push(v / norm);
        }
    }
    *dirs = out;
}
