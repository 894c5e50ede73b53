use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::textproc::TokenDoc;

/// When two frequent bigrams count as overlapping during pruning.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SharedWordRule {
    /// Bigrams overlap when they have at least one word in common.
    #[default]
    AnyWord,
    /// Bigrams overlap only when they consist of the same words. Since
    /// bigrams are already merged as unordered pairs this disables pruning.
    SameWords,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KEstimate {
    pub k: usize,
    /// Bigrams left after merging, pruning and dropping singletons, most
    /// frequent first.
    pub phrases: Vec<((String, String), usize)>,
    pub clamped: bool,
}

/// Estimates the cluster count from the corpus' bigram phrases: adjacent
/// token pairs are merged as unordered pairs with their counts; of any two
/// phrases sharing a word the less frequent one is deleted (ties delete the
/// lexicographically later one); phrases seen once are deleted; the survivors
/// are counted. The result is clamped to `[2, m - 1]`.
pub fn infer_k(docs: &[TokenDoc], rule: SharedWordRule) -> KEstimate {
    let mut counts: BTreeMap<(String, String), usize> = BTreeMap::new();
    for doc in docs {
        for w in doc.tokens.windows(2) {
            let key = if w[0] <= w[1] {
                (w[0].clone(), w[1].clone())
            } else {
                (w[1].clone(), w[0].clone())
            };
            *counts.entry(key).or_default() += 1;
        }
    }

    let mut ranked: Vec<((String, String), usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let mut survivors: Vec<((String, String), usize)> = Vec::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    for (pair, count) in ranked {
        if rule == SharedWordRule::AnyWord && (used.contains(&pair.0) || used.contains(&pair.1)) {
            continue;
        }
        used.insert(pair.0.clone());
        used.insert(pair.1.clone());
        survivors.push((pair, count));
    }
    survivors.retain(|(_, c)| *c > 1);

    let raw = survivors.len();
    let m = docs.len();
    let (lo, hi) = if m <= 2 { (m.max(1), m.max(1)) } else { (2, m - 1) };
    let k = raw.clamp(lo, hi);
    let clamped = k != raw;
    if clamped {
        log::warn!("bigram heuristic found {raw} phrase(s); clamped K to {k} for {m} document(s)");
    }
    KEstimate {
        k,
        phrases: survivors,
        clamped,
    }
}
