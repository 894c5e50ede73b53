//! Sentence splitting and conjunction-based atomic segmentation.
//!
//! Segmentation is lexical. Adversative conjunctions truncate a sentence to
//! the material after the last one. Copulative conjunctions split a sentence
//! in two: when both sides carry a verb the sides become separate sentences,
//! otherwise the conjunction joins two phrases and the shared stem (subject
//! and verb) plus any trailing modifier are copied onto both conjuncts.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Category, Review};

const DEFAULT_VERBS: &str = include_str!("../data/verbs.txt");

/// Words that open a trailing modifier shared by both phrase conjuncts, as
/// in "a lock and a shortcut *for the lockscreen*".
const MODIFIER_OPENERS: &[&str] = &[
    "for", "from", "on", "in", "with", "to", "at", "of", "into", "onto", "about", "by", "via",
    "without", "under", "over", "after", "before", "during", "when", "while", "because", "since",
    "if", "so",
];

/// Words ending in -ing that are not verb forms.
const NON_VERB_ING: &[&str] = &[
    "string", "morning", "evening", "ceiling", "during", "spring", "wing", "king", "ring",
];

const MAX_DEPTH: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomicSentence {
    pub review_id: String,
    pub seq: usize,
    pub text: String,
    pub category: Category,
}

#[derive(Debug, Clone)]
pub struct SegmenterConfig {
    pub copulative: Vec<String>,
    pub adversative: Vec<String>,
    pub verbs: HashSet<String>,
}

impl Default for SegmenterConfig {
    fn default() -> Self {
        let s = |v: &[&str]| v.iter().map(|c| c.to_string()).collect();
        SegmenterConfig {
            copulative: s(&["and", "as well as", "moreover", "plus"]),
            adversative: s(&["but", "yet", "however"]),
            verbs: parse_word_list(DEFAULT_VERBS),
        }
    }
}

impl SegmenterConfig {
    pub fn with_verb_file(mut self, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("verb lexicon {}: {e}", path.display())))?;
        self.verbs = parse_word_list(&text);
        Ok(self)
    }

    fn is_verb(&self, word: &str) -> bool {
        if word.is_empty() {
            return false;
        }
        if self.verbs.contains(word) {
            return true;
        }
        if word.ends_with("n't") || ["'d", "'ll", "'ve", "'m", "'re"].iter().any(|s| word.ends_with(s)) {
            return true;
        }
        if word.ends_with("ing")
            && word.len() >= 5
            && !word.ends_with("thing")
            && !NON_VERB_ING.contains(&word)
        {
            return true;
        }
        if word.ends_with("ed") && !word.ends_with("eed") && word.len() >= 4 {
            return true;
        }
        if let Some(stem) = word.strip_suffix('s') {
            if !stem.ends_with('s') && self.verbs.contains(stem) {
                return true;
            }
            if let Some(stem) = stem.strip_suffix('e') {
                if self.verbs.contains(stem) {
                    return true;
                }
            }
        }
        false
    }
}

fn parse_word_list(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

/// Splits raw review text into sentences on `.`, `!`, `?` and `;`. Runs of
/// two or more dots (ellipses) and dots between digits are not boundaries.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if !is_terminator(c) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < chars.len() && is_terminator(chars[j].1) {
            j += 1;
        }
        let run = &chars[i..j];
        let ellipsis = run.len() >= 2 && run.iter().all(|&(_, c)| c == '.');
        let decimal = run.len() == 1
            && c == '.'
            && i > 0
            && chars[i - 1].1.is_ascii_digit()
            && chars.get(j).is_some_and(|&(_, n)| n.is_ascii_digit());
        if !ellipsis && !decimal {
            push_fragment(&mut out, &text[start..pos]);
            start = chars.get(j).map_or(text.len(), |&(p, _)| p);
        }
        i = j;
    }
    push_fragment(&mut out, &text[start..]);
    out
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | ';')
}

fn push_fragment(out: &mut Vec<String>, frag: &str) {
    let frag = frag.trim();
    if !frag.is_empty() {
        out.push(frag.to_string());
    }
}

#[derive(Debug, Clone, Copy)]
struct Word<'a> {
    start: usize,
    end: usize,
    raw: &'a str,
}

impl Word<'_> {
    fn norm(&self) -> String {
        self.raw
            .trim_matches(|c: char| !c.is_alphanumeric() && c != '\'')
            .replace('\u{2019}', "'")
            .to_lowercase()
    }
}

fn words(text: &str) -> Vec<Word<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Word { start: s, end: i, raw: &text[s..i] });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Word { start: s, end: text.len(), raw: &text[s..] });
    }
    out
}

/// Word-index range `[from, to)` of every occurrence of any phrase in
/// `phrases`, in text order.
fn find_phrases(norms: &[String], phrases: &[Vec<String>]) -> Vec<(usize, usize)> {
    let mut hits = Vec::new();
    let mut i = 0;
    while i < norms.len() {
        let hit = phrases
            .iter()
            .filter(|p| !p.is_empty() && i + p.len() <= norms.len())
            .filter(|p| p.iter().zip(&norms[i..]).all(|(a, b)| a == b))
            .map(|p| p.len())
            .max();
        match hit {
            Some(len) => {
                hits.push((i, i + len));
                i += len;
            }
            None => i += 1,
        }
    }
    hits
}

fn phrase_words(list: &[String]) -> Vec<Vec<String>> {
    list.iter()
        .map(|p| p.split_whitespace().map(str::to_lowercase).collect())
        .collect()
}

fn clean(s: &str) -> &str {
    s.trim_matches(|c: char| c.is_whitespace() || c == ',' || c == ';')
}

fn join_parts(parts: &[&str]) -> String {
    parts
        .iter()
        .map(|p| clean(p))
        .filter(|p| !p.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Splits one sentence into atomic sentences, each carrying a single concern.
/// Never returns an empty list; when no rule applies the input comes back
/// unchanged.
pub fn segment_atomic(sentence: &str, config: &SegmenterConfig) -> Vec<String> {
    let adversative = phrase_words(&config.adversative);
    let copulative = phrase_words(&config.copulative);
    let cleaned = clean(sentence);
    let Some(focus) = truncate_adversative(cleaned, &adversative, 0) else {
        return vec![cleaned.to_string()];
    };
    let mut out = Vec::new();
    split_copulative(&focus, &copulative, config, 0, &mut out);
    if out.is_empty() {
        out.push(cleaned.to_string());
    }
    out
}

/// Keeps only the text after the last adversative conjunction. Falls back to
/// the text before it when nothing follows.
fn truncate_adversative(text: &str, adversative: &[Vec<String>], depth: usize) -> Option<String> {
    let text = clean(text);
    if text.is_empty() {
        return None;
    }
    let ws = words(text);
    let norms: Vec<String> = ws.iter().map(Word::norm).collect();
    let Some(&(from, to)) = find_phrases(&norms, adversative).last() else {
        return Some(text.to_string());
    };
    if depth >= MAX_DEPTH {
        return Some(text.to_string());
    }
    let after = trim_leading_punct(&text[ws[to - 1].end..]);
    if !after.is_empty() {
        return Some(after.to_string());
    }
    truncate_adversative(&text[..ws[from].start], adversative, depth + 1)
}

fn trim_leading_punct(s: &str) -> &str {
    clean(s).trim_start_matches(|c: char| matches!(c, ',' | ';' | ':' | '-' | '\u{2014}') || c.is_whitespace())
}

fn split_copulative(
    text: &str,
    copulative: &[Vec<String>],
    config: &SegmenterConfig,
    depth: usize,
    out: &mut Vec<String>,
) {
    let text = clean(text);
    if text.is_empty() {
        return;
    }
    let ws = words(text);
    let norms: Vec<String> = ws.iter().map(Word::norm).collect();
    let Some(&(from, to)) = find_phrases(&norms, copulative).first() else {
        out.push(text.to_string());
        return;
    };
    if depth >= MAX_DEPTH {
        out.push(text.to_string());
        return;
    }
    let left = clean(&text[..ws[from].start]);
    let right = clean(&text[ws[to - 1].end..]);
    let recurse = |t: &str, out: &mut Vec<String>| split_copulative(t, copulative, config, depth + 1, out);
    match (left.is_empty(), right.is_empty()) {
        (true, true) => {
            out.push(text.to_string());
            return;
        }
        (true, false) => return recurse(right, out),
        (false, true) => return recurse(left, out),
        _ => {}
    }

    let left_ws = &ws[..from];
    let left_norms = &norms[..from];
    let right_ws = &ws[to..];
    let right_norms = &norms[to..];
    let left_has_verb = left_norms.iter().any(|w| config.is_verb(w));
    let right_has_verb = right_norms.iter().any(|w| config.is_verb(w));

    // Clause join: both sides stand alone.
    if left_has_verb && right_has_verb {
        recurse(left, out);
        recurse(right, out);
        return;
    }

    // Phrase join: the stem runs through the last verb on the left.
    let stem_len = left_norms
        .iter()
        .rposition(|w| config.is_verb(w))
        .map_or(0, |i| i + 1);
    if stem_len == left_ws.len() {
        recurse(left, out);
        recurse(right, out);
        return;
    }
    let stem = if stem_len == 0 {
        ""
    } else {
        &text[..left_ws[stem_len - 1].end]
    };
    let left_conj = &text[left_ws[stem_len].start..left_ws[left_ws.len() - 1].end];
    let left_has_modifier = left_norms[stem_len..]
        .iter()
        .any(|w| MODIFIER_OPENERS.contains(&w.as_str()));
    let modifier_at = if left_has_modifier {
        None
    } else {
        right_norms
            .iter()
            .skip(1)
            .position(|w| MODIFIER_OPENERS.contains(&w.as_str()))
            .map(|p| p + 1)
    };
    let (right_conj, tail) = match modifier_at {
        Some(p) => (
            &text[right_ws[0].start..right_ws[p - 1].end],
            &text[right_ws[p].start..],
        ),
        None => (right, ""),
    };
    recurse(&join_parts(&[stem, left_conj, tail]), out);
    recurse(&join_parts(&[stem, right_conj, tail]), out);
}

/// Splits a review into sentences and then atomic sentences, numbered in
/// order of appearance. The review's category is inherited.
pub fn segment_review(review: &Review, config: &SegmenterConfig) -> Vec<AtomicSentence> {
    split_sentences(&review.text)
        .iter()
        .flat_map(|s| segment_atomic(s, config))
        .enumerate()
        .map(|(seq, text)| AtomicSentence {
            review_id: review.id.clone(),
            seq,
            text,
            category: review.category,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seg(s: &str) -> Vec<String> {
        segment_atomic(s, &SegmenterConfig::default())
    }

    #[test]
    fn splits_on_terminators() {
        assert_eq!(split_sentences("Good. Crashes a lot!"), ["Good", "Crashes a lot"]);
        assert_eq!(split_sentences("Wait... it broke"), ["Wait... it broke"]);
        assert!(split_sentences("").is_empty());
        assert_eq!(split_sentences("One; two?! three"), ["One", "two", "three"]);
        assert_eq!(split_sentences("Version 2.5 broke it."), ["Version 2.5 broke it"]);
        assert!(split_sentences("?!. ;").is_empty());
    }

    #[test]
    fn phrase_join_duplicates_stem_and_modifier() {
        assert_eq!(
            seg("I wish there was a pattern lock feature and a camera shortcut for the lockscreen"),
            [
                "I wish there was a pattern lock feature for the lockscreen",
                "I wish there was a camera shortcut for the lockscreen",
            ]
        );
    }

    #[test]
    fn clause_join_splits_sides() {
        assert_eq!(
            seg("I wish it had audio controls, and I wish there was a camera shortcut from the lock screen"),
            [
                "I wish it had audio controls",
                "I wish there was a camera shortcut from the lock screen",
            ]
        );
    }

    #[test]
    fn adversative_keeps_tail() {
        assert_eq!(
            seg("This app is good, but it is lacking a key feature for anyone who uses mailing lists: Reply-To-List"),
            ["it is lacking a key feature for anyone who uses mailing lists: Reply-To-List"]
        );
    }

    #[test]
    fn last_adversative_wins() {
        assert_eq!(seg("Nice but slow, yet it still crashes"), ["it still crashes"]);
        assert_eq!(seg("However, sync fails"), ["sync fails"]);
    }

    #[test]
    fn trailing_adversative_falls_back_to_head() {
        assert_eq!(seg("it crashes but"), ["it crashes"]);
    }

    #[test]
    fn no_conjunction_is_identity() {
        assert_eq!(seg("Crashes on startup"), ["Crashes on startup"]);
    }

    #[test]
    fn adversative_then_copulative() {
        assert_eq!(
            seg("Looks great but it drains battery and it crashes"),
            ["it drains battery", "it crashes"]
        );
    }

    #[test]
    fn multiword_and_leading_conjunctions() {
        assert_eq!(
            seg("I want widgets as well as a dark theme"),
            ["I want widgets", "I want a dark theme"]
        );
        assert_eq!(seg("Moreover it lags"), ["it lags"]);
    }

    #[test]
    fn three_way_list_splits_fully() {
        assert_eq!(
            seg("please add a timer and a stopwatch and an alarm for the widget"),
            [
                "please add a timer for the widget",
                "please add a stopwatch for the widget",
                "please add an alarm for the widget",
            ]
        );
    }

    #[test]
    fn custom_conjunctions() {
        let cfg = SegmenterConfig {
            adversative: vec!["although".into()],
            ..SegmenterConfig::default()
        };
        assert_eq!(segment_atomic("ok although it crashes", &cfg), ["it crashes"]);
        assert_eq!(segment_atomic("ok but it crashes", &cfg), ["ok but it crashes"]);
    }

    #[test]
    fn review_segments_are_numbered() {
        let review = Review {
            id: "r1".into(),
            app_id: "a".into(),
            text: "Good app, but it freezes. I want dark mode and a widget!".into(),
            timestamp: None,
            category: Category::FeatureRequest,
        };
        let atoms = segment_review(&review, &SegmenterConfig::default());
        let texts: Vec<_> = atoms.iter().map(|a| a.text.as_str()).collect();
        assert_eq!(texts, ["it freezes", "I want dark mode", "I want a widget"]);
        assert_eq!(atoms.iter().map(|a| a.seq).collect::<Vec<_>>(), [0, 1, 2]);
        assert!(atoms.iter().all(|a| a.category == Category::FeatureRequest));
    }

    #[test]
    fn verb_heuristics() {
        let cfg = SegmenterConfig::default();
        for w in ["crashes", "loads", "freezes", "loading", "crashed", "doesn't", "i'd", "is"] {
            assert!(cfg.is_verb(w), "{w}");
        }
        for w in ["lockscreen", "feature", "something", "string", "speed", "lists", "a"] {
            assert!(!cfg.is_verb(w), "{w}");
        }
    }

    const VOCAB: &[&str] = &[
        "i", "wish", "the", "app", "and", "but", "yet", "however", "as", "well", "plus", "moreover",
        "crashes", "a", "dark", "theme", "for", "widget", "is", "slow", "sync", "with", "on",
        "startup", "please", "add", "it", "was", "fails", ",",
    ];

    fn sentence() -> impl Strategy<Value = String> {
        proptest::collection::vec(proptest::sample::select(VOCAB), 1..14).prop_map(|w| w.join(" "))
    }

    fn has_content(s: &str, cfg: &SegmenterConfig) -> bool {
        let conj: Vec<String> = cfg.copulative.iter().chain(&cfg.adversative).cloned().collect();
        s.split_whitespace()
            .any(|w| w != "," && !conj.contains(&w.to_string()) && !["as", "well"].contains(&w))
    }

    proptest! {
        #[test]
        fn output_is_fixed_point_and_conjunction_free(s in sentence()) {
            let cfg = SegmenterConfig::default();
            prop_assume!(has_content(&s, &cfg));
            let out = segment_atomic(&s, &cfg);
            prop_assert!(!out.is_empty());
            let adv = phrase_words(&cfg.adversative);
            for t in &out {
                prop_assert!(!t.is_empty());
                prop_assert_eq!(segment_atomic(t, &cfg), vec![t.clone()]);
                let norms: Vec<String> = words(t).iter().map(Word::norm).collect();
                prop_assert!(find_phrases(&norms, &adv).is_empty(), "{t:?}");
            }
        }
    }
}
