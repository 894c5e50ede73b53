//! Noise stripping, dictionary lemmatization, stopword removal and
//! deduplication of atomic sentences.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use chrono::{DateTime, Utc};
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Category;
use crate::segment::AtomicSentence;

const DEFAULT_LEMMAS: &str = include_str!("../data/lemmas.tsv");
const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");
const DEFAULT_ACRONYMS: &str = include_str!("../data/acronyms.tsv");

/// A normalized atomic sentence: distinct lowercase tokens in first-seen order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenDoc {
    pub doc_id: String,
    pub review_id: String,
    pub seq: usize,
    pub category: Category,
    /// The atomic sentence before normalization.
    pub text: String,
    pub tokens: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<DateTime<Utc>>,
}

impl TokenDoc {
    pub fn doc_id_for(review_id: &str, seq: usize) -> String {
        format!("{review_id}#{seq}")
    }
}

fn punct_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\p{P}\s*").unwrap())
}

fn non_alnum_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"[^a-zA-Z0-9\s]*").unwrap())
}

/// Replaces punctuation (and the whitespace after it) with a space, deletes
/// every remaining non-alphanumeric character, lowercases, and collapses
/// whitespace.
pub fn strip_noise(text: &str) -> String {
    let spaced = punct_re().replace_all(text, " ");
    let alnum = non_alnum_re().replace_all(&spaced, "");
    alnum
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

fn is_token(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit())
}

/// Two-column `key<TAB>value` table, `#` comments allowed.
fn parse_table(text: &str, source: &str) -> Result<Vec<(String, String)>> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('\t')
            .ok_or_else(|| Error::Config(format!("{source}:{}: expected two tab-separated columns", n + 1)))?;
        rows.push((k.trim().to_lowercase(), v.trim().to_lowercase()));
    }
    Ok(rows)
}

/// Inflected form to lemma lookup. Words without an entry map to themselves.
#[derive(Debug, Clone, Default)]
pub struct LemmaDict {
    map: HashMap<String, String>,
}

impl LemmaDict {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut map = HashMap::new();
        for (k, v) in parse_table(text, source)? {
            if !is_token(&k) || !is_token(&v) {
                return Err(Error::Config(format!(
                    "{source}: lemma entry {k:?} -> {v:?} is not lowercase alphanumeric"
                )));
            }
            map.insert(k, v);
        }
        Ok(LemmaDict { map })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("lemma dictionary {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_LEMMAS, "builtin lemmas").expect("builtin lemma table is valid")
    }

    pub fn insert(&mut self, inflected: &str, lemma: &str) {
        self.map.insert(inflected.to_string(), lemma.to_string());
    }

    pub fn lemma<'a>(&'a self, word: &'a str) -> &'a str {
        self.map.get(word).map_or(word, String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct StopwordList {
    words: HashSet<String>,
}

impl StopwordList {
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        StopwordList { words }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("stopword list {}: {e}", path.display())))?;
        Ok(Self::parse(&text))
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_STOPWORDS)
    }

    pub fn from_words<I: IntoIterator<Item = S>, S: Into<String>>(words: I) -> Self {
        StopwordList {
            words: words.into_iter().map(Into::into).collect(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    /// Removes every word occurring in the app's GUI string literals.
    pub fn whitelist_gui_strings(&mut self, strings_xml: &str) -> usize {
        let before = self.words.len();
        for literal in extract_string_literals(strings_xml) {
            for w in strip_noise(&literal).split_whitespace() {
                self.words.remove(w);
            }
        }
        before - self.words.len()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Pulls the text content of `<string ...>...</string>` elements by pattern.
pub fn extract_string_literals(xml: &str) -> Vec<String> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"(?s)<string\b[^>]*>(.*?)</string>").unwrap());
    re.captures_iter(xml)
        .map(|c| {
            c[1].replace("&amp;", "&")
                .replace("&lt;", "<")
                .replace("&gt;", ">")
                .replace("&quot;", "\"")
                .replace("&apos;", "'")
                .replace("\\'", "'")
        })
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct AcronymTable {
    map: HashMap<String, Vec<String>>,
}

impl AcronymTable {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut map = HashMap::new();
        for (k, v) in parse_table(text, source)? {
            let expansion: Vec<String> = strip_noise(&v).split_whitespace().map(String::from).collect();
            map.insert(k, expansion);
        }
        Ok(AcronymTable { map })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("acronym table {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_ACRONYMS, "builtin acronyms").expect("builtin acronym table is valid")
    }

    fn expand<'a>(&'a self, word: &'a str) -> Option<&'a [String]> {
        self.map.get(word).map(Vec::as_slice)
    }
}

/// Maps noise-stripped text to tokens: lemma lookup, stopword removal, and
/// first-occurrence deduplication.
pub fn normalize_tokens(text: &str, lemmas: &LemmaDict, stopwords: &StopwordList) -> Vec<String> {
    let mut seen = HashSet::new();
    text.split_whitespace()
        .map(|w| lemmas.lemma(w))
        .filter(|w| !stopwords.contains(w))
        .filter(|w| seen.insert(w.to_string()))
        .map(String::from)
        .collect()
}

/// The full normalization configuration.
#[derive(Debug, Clone)]
pub struct TextNormalizer {
    pub lemmas: LemmaDict,
    pub stopwords: StopwordList,
    pub acronyms: AcronymTable,
}

impl Default for TextNormalizer {
    fn default() -> Self {
        TextNormalizer {
            lemmas: LemmaDict::builtin(),
            stopwords: StopwordList::builtin(),
            acronyms: AcronymTable::builtin(),
        }
    }
}

impl TextNormalizer {
    /// Strips noise, expands acronyms, then lemmatizes, removes stopwords and
    /// deduplicates.
    pub fn tokens(&self, raw: &str) -> Vec<String> {
        let mut seen = HashSet::new();
        self.token_stream(raw)
            .into_iter()
            .filter(|w| seen.insert(w.clone()))
            .collect()
    }

    /// Like [`tokens`](Self::tokens) but keeps repeated words.
    pub fn token_stream(&self, raw: &str) -> Vec<String> {
        let stripped = strip_noise(raw);
        stripped
            .split_whitespace()
            .flat_map(|w| match self.acronyms.expand(w) {
                Some(exp) => exp.iter().map(String::as_str).collect::<Vec<_>>(),
                None => vec![w],
            })
            .map(|w| self.lemmas.lemma(w))
            .filter(|w| !self.stopwords.contains(w))
            .map(String::from)
            .collect()
    }

    pub fn token_doc(&self, atom: &AtomicSentence, timestamp: Option<DateTime<Utc>>) -> TokenDoc {
        TokenDoc {
            doc_id: TokenDoc::doc_id_for(&atom.review_id, atom.seq),
            review_id: atom.review_id.clone(),
            seq: atom.seq,
            category: atom.category,
            text: atom.text.clone(),
            tokens: self.tokens(&atom.text),
            timestamp,
        }
    }
}

/// Removes documents with fewer than two tokens, preserving order.
pub fn drop_short(docs: Vec<TokenDoc>) -> Vec<TokenDoc> {
    docs.into_iter().filter(|d| d.tokens.len() >= 2).collect()
}
