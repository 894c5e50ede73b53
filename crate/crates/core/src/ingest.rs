//! Review loading, category labels and the evolution-relevance filter.

use std::collections::HashSet;
use std::path::Path;

use chrono::{DateTime, Utc};
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{read_json_lines, Loaded};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    InformationGiving,
    InformationSeeking,
    FeatureRequest,
    ProblemDiscovery,
    Unlabeled,
}

impl Category {
    /// Feature requests and problem reports are the only categories that
    /// drive app evolution.
    pub fn is_informative(self) -> bool {
        matches!(self, Category::FeatureRequest | Category::ProblemDiscovery)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::InformationGiving => "information_giving",
            Category::InformationSeeking => "information_seeking",
            Category::FeatureRequest => "feature_request",
            Category::ProblemDiscovery => "problem_discovery",
            Category::Unlabeled => "unlabeled",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Review {
    pub id: String,
    pub app_id: String,
    pub text: String,
    pub timestamp: Option<DateTime<Utc>>,
    pub category: Category,
}

#[derive(Deserialize)]
struct RawReview {
    id: String,
    #[serde(default)]
    app_id: String,
    text: String,
    #[serde(default)]
    timestamp: Option<String>,
    #[serde(default)]
    category: Option<Category>,
}

impl RawReview {
    fn validate(self) -> std::result::Result<Review, String> {
        if self.id.trim().is_empty() {
            return Err("empty review id".into());
        }
        if self.text.trim().is_empty() {
            return Err(format!("review {} has empty text", self.id));
        }
        let timestamp = match self.timestamp {
            Some(ts) => Some(
                DateTime::parse_from_rfc3339(&ts)
                    .map_err(|e| format!("review {}: bad timestamp {ts:?}: {e}", self.id))?
                    .with_timezone(&Utc),
            ),
            None => None,
        };
        Ok(Review {
            id: self.id,
            app_id: self.app_id,
            text: self.text,
            timestamp,
            category: self.category.unwrap_or(Category::Unlabeled),
        })
    }
}

/// Loads a JSON-Lines review dump. Malformed records and records repeating an
/// already-seen id are skipped and counted.
pub fn load_reviews(path: &Path) -> Result<Loaded<Review>> {
    let mut seen = HashSet::new();
    let loaded = read_json_lines(path, |raw: RawReview| {
        let review = raw.validate()?;
        if !seen.insert(review.id.clone()) {
            return Err(format!("duplicate review id {}", review.id));
        }
        Ok(review)
    })?;
    if loaded.records.is_empty() {
        return Err(Error::format(path, "no parseable review records"));
    }
    Ok(loaded)
}

/// Keyword cues used by [`heuristic_classify`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CueLists {
    pub request: Vec<String>,
    pub problem: Vec<String>,
}

impl Default for CueLists {
    fn default() -> Self {
        let s = |v: &[&str]| v.iter().map(|c| c.to_string()).collect();
        CueLists {
            request: s(&["wish", "add", "would be nice", "please", "should", "want"]),
            problem: s(&["crash", "bug", "error", "doesn't work", "fails", "freez"]),
        }
    }
}

/// Compiled form of [`CueLists`]. A cue matches when it starts at a word
/// boundary, so "freez" catches "freezes" and "freezing".
#[derive(Debug, Clone)]
pub struct CueMatcher {
    request: Option<Regex>,
    problem: Option<Regex>,
}

impl CueMatcher {
    pub fn new(cues: &CueLists) -> Result<Self> {
        Ok(CueMatcher {
            request: compile_cues(&cues.request)?,
            problem: compile_cues(&cues.problem)?,
        })
    }
}

impl Default for CueMatcher {
    fn default() -> Self {
        CueMatcher::new(&CueLists::default()).expect("default cues compile")
    }
}

fn compile_cues(cues: &[String]) -> Result<Option<Regex>> {
    let alts: Vec<String> = cues
        .iter()
        .map(|c| c.trim().to_lowercase())
        .filter(|c| !c.is_empty())
        .map(|c| regex::escape(&c))
        .collect();
    if alts.is_empty() {
        return Ok(None);
    }
    let pattern = format!(r"(?i)\b(?:{})", alts.join("|"));
    Regex::new(&pattern)
        .map(Some)
        .map_err(|e| Error::Config(format!("bad cue list: {e}")))
}

/// Assigns a category to an unlabeled review from keyword cues. Request cues
/// take precedence over problem cues.
pub fn heuristic_classify(mut review: Review, cues: &CueMatcher) -> Review {
    let text = review.text.replace('\u{2019}', "'");
    let hit = |re: &Option<Regex>| re.as_ref().is_some_and(|re| re.is_match(&text));
    review.category = if hit(&cues.request) {
        Category::FeatureRequest
    } else if hit(&cues.problem) {
        Category::ProblemDiscovery
    } else {
        Category::InformationGiving
    };
    review
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutcome {
    pub kept: Vec<Review>,
    /// Unlabeled reviews discarded because no fallback classifier was given.
    pub dropped_unlabeled: usize,
}

/// Keeps feature requests and problem reports, in input order. Unlabeled
/// reviews go through the keyword classifier when `fallback` is set and are
/// dropped otherwise.
pub fn filter_informative(reviews: Vec<Review>, fallback: Option<&CueMatcher>) -> FilterOutcome {
    let mut kept = Vec::new();
    let mut dropped_unlabeled = 0;
    for review in reviews {
        let review = match (review.category, fallback) {
            (Category::Unlabeled, Some(cues)) => heuristic_classify(review, cues),
            (Category::Unlabeled, None) => {
                dropped_unlabeled += 1;
                continue;
            }
            _ => review,
        };
        if review.category.is_informative() {
            kept.push(review);
        }
    }
    if dropped_unlabeled > 0 {
        log::warn!("dropped {dropped_unlabeled} unlabeled review(s); enable the fallback classifier to keep them");
    }
    FilterOutcome {
        kept,
        dropped_unlabeled,
    }
}
