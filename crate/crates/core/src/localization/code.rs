use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;
use walkdir::WalkDir;

use super::commits::{is_source_path, normalize_path};
use crate::error::{Error, Result};
use crate::textproc::TextNormalizer;

/// Normalized word counts.
pub type WordBag = BTreeMap<String, u32>;

const KEYWORDS: &[&str] = &[
    "if", "else", "for", "while", "do", "switch", "when", "case", "return", "new", "throw", "throws",
    "catch", "try", "finally", "synchronized", "super", "this", "assert", "yield", "await", "import",
    "package", "goto", "sizeof", "typeof", "instanceof", "in", "is", "as", "and", "or", "not",
];

fn method_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?m)(?:^|[\s(])([A-Za-z_][\w<>\[\],.?]*)\s+([A-Za-z_]\w*)\s*\(").unwrap())
}

fn doc_comment_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?s)/\*\*(.*?)\*/").unwrap())
}

fn doc_tag_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"@\w+").unwrap())
}

fn identifier_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"[A-Za-z_]\w*").unwrap())
}

/// Splits an identifier on underscores, digits-to-letters and camel-case
/// boundaries: `HTTPClientWrapper_v2` becomes `HTTP Client Wrapper v2`.
pub fn split_identifier(ident: &str) -> Vec<String> {
    let mut words = Vec::new();
    for part in ident.split(['_', '-', '$']) {
        let chars: Vec<char> = part.chars().collect();
        let mut start = 0;
        for i in 1..chars.len() {
            let (prev, cur) = (chars[i - 1], chars[i]);
            let next_lower = chars.get(i + 1).is_some_and(|c| c.is_lowercase());
            let boundary = (prev.is_lowercase() && cur.is_uppercase())
                || (prev.is_alphabetic() && cur.is_ascii_digit())
                || (prev.is_ascii_digit() && cur.is_alphabetic())
                || (prev.is_uppercase() && cur.is_uppercase() && next_lower);
            if boundary {
                words.push(chars[start..i].iter().collect());
                start = i;
            }
        }
        if start < chars.len() {
            words.push(chars[start..].iter().collect());
        }
    }
    words
}

/// Blanks out comments and string/char literals, keeping byte offsets.
fn mask_comments_and_strings(src: &str) -> String {
    let bytes = src.as_bytes();
    let mut out = bytes.to_vec();
    let mut i = 0;
    while i < bytes.len() {
        let rest = &bytes[i..];
        let end = if rest.starts_with(b"//") {
            i + rest.iter().position(|&b| b == b'\n').unwrap_or(rest.len())
        } else if rest.starts_with(b"/*") {
            i + 2 + rest[2..].windows(2).position(|w| w == b"*/").map_or(rest.len() - 2, |p| p + 2)
        } else if rest[0] == b'"' || rest[0] == b'\'' {
            let quote = rest[0];
            let mut j = 1;
            while j < rest.len() && rest[j] != quote && rest[j] != b'\n' {
                j += if rest[j] == b'\\' { 2 } else { 1 };
            }
            i + (j + 1).min(rest.len())
        } else {
            i += 1;
            continue;
        };
        for b in &mut out[i..end] {
            if *b != b'\n' {
                *b = b' ';
            }
        }
        i = end;
    }
    // Only ASCII bytes were replaced, and whole multi-byte runs at that.
    String::from_utf8(out).unwrap_or_else(|e| String::from_utf8_lossy(e.as_bytes()).into_owned())
}

/// The raw identifiers and comment text a source file contributes, before
/// normalization.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodeParts {
    pub path_segments: Vec<String>,
    pub doc_comments: Vec<String>,
    pub methods: Vec<String>,
    pub fields: Vec<String>,
}

pub fn extract_code_parts(path: &str, contents: &str) -> CodeParts {
    let path = normalize_path(path);
    let mut path_segments: Vec<String> = path
        .split('/')
        .filter(|s| !s.is_empty())
        .map(|s| s.to_string())
        .collect();
    if let Some(last) = path_segments.last_mut() {
        if let Some((stem, _)) = last.rsplit_once('.') {
            if !stem.is_empty() {
                *last = stem.to_string();
            }
        }
    }

    let doc_comments = doc_comment_re()
        .captures_iter(contents)
        .map(|c| doc_tag_re().replace_all(&c[1], " ").replace('*', " "))
        .collect();

    let code = mask_comments_and_strings(contents);
    let methods = method_re()
        .captures_iter(&code)
        .filter(|c| !KEYWORDS.contains(&&c[1]) && !KEYWORDS.contains(&&c[2]))
        .map(|c| c[2].to_string())
        .collect();

    CodeParts {
        path_segments,
        doc_comments,
        methods,
        fields: field_identifiers(&code),
    }
}

/// Identifiers directly before `;` or `=` in statements at brace depth one,
/// i.e. class-body declarations.
fn field_identifiers(code: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut paren = 0usize;
    let mut stmt_start = 0;
    let mut in_initializer = false;
    for (i, c) in code.char_indices() {
        match c {
            '{' => {
                depth += 1;
                stmt_start = i + 1;
                in_initializer = false;
            }
            '}' => {
                depth = depth.saturating_sub(1);
                stmt_start = i + 1;
                in_initializer = false;
            }
            // Newlines end initializers in languages without semicolons.
            '\n' if in_initializer && depth == 1 && paren == 0 => {
                stmt_start = i + 1;
                in_initializer = false;
            }
            '(' => paren += 1,
            ')' => paren = paren.saturating_sub(1),
            ';' | '=' if depth == 1 && paren == 0 => {
                if !in_initializer {
                    let stmt = &code[stmt_start..i];
                    // `==`, `!=`, `<=`, `>=` are comparisons, not declarations.
                    let comparison = c == '=' && (code[i + 1..].starts_with('=') || stmt.ends_with(['!', '<', '>', '=']));
                    if !comparison && !stmt.contains('(') {
                        if let Some(m) = identifier_re().find_iter(stmt).last() {
                            if !KEYWORDS.contains(&m.as_str()) {
                                out.push(m.as_str().to_string());
                            }
                        }
                    }
                }
                if c == ';' {
                    stmt_start = i + 1;
                    in_initializer = false;
                } else {
                    in_initializer = true;
                }
            }
            _ => {}
        }
    }
    out
}

/// Normalized word bag of a source file: path segments, doc comments,
/// method names and field names, split into words and normalized.
pub fn extract_code_doc(path: &str, contents: &str, normalizer: &TextNormalizer) -> WordBag {
    let parts = extract_code_parts(path, contents);
    let mut raw = Vec::new();
    let identifiers = parts
        .path_segments
        .iter()
        .chain(&parts.methods)
        .chain(&parts.fields)
        .map(String::as_str);
    for ident in identifiers {
        raw.extend(split_identifier(ident));
    }
    for comment in &parts.doc_comments {
        for m in identifier_re().find_iter(comment) {
            raw.extend(split_identifier(m.as_str()));
        }
    }
    let mut bag = WordBag::new();
    for w in normalizer.token_stream(&raw.join(" ")) {
        *bag.entry(w).or_default() += 1;
    }
    bag
}

/// A source file's repo-relative path and contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub path: String,
    pub contents: String,
}

/// Reads every non-hidden file under `root` whose path does not end in a
/// non-source suffix. Files that are unreadable or not UTF-8 are skipped
/// with a warning. Paths come back sorted.
pub fn scan_source_tree(root: &Path, non_source_suffixes: &[String]) -> Result<Vec<SourceFile>> {
    if !root.is_dir() {
        return Err(Error::Config(format!("source tree {} is not a directory", root.display())));
    }
    let mut files = Vec::new();
    let walker = WalkDir::new(root)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !e.file_name().to_string_lossy().starts_with('.'));
    for entry in walker {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => {
                log::warn!("skipping unreadable entry: {e}");
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry.path().strip_prefix(root).unwrap_or(entry.path());
        let rel = normalize_path(&rel.to_string_lossy());
        if !is_source_path(&rel, non_source_suffixes) {
            continue;
        }
        match std::fs::read_to_string(entry.path()) {
            Ok(contents) => files.push(SourceFile { path: rel, contents }),
            Err(e) => log::warn!("skipping {}: {e}", entry.path().display()),
        }
    }
    files.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn camel_split() {
        assert_eq!(split_identifier("LockScreenManager"), ["Lock", "Screen", "Manager"]);
        assert_eq!(split_identifier("HTTPClient_v2"), ["HTTP", "Client", "v", "2"]);
        assert_eq!(split_identifier("wakeScreen"), ["wake", "Screen"]);
        assert_eq!(split_identifier("MAX_SIZE"), ["MAX", "SIZE"]);
    }

    #[test]
    fn path_words() {
        let bag = extract_code_doc("app/src/LockScreenManager", "", &TextNormalizer::default());
        for w in ["lock", "screen", "manager"] {
            assert!(bag.contains_key(w), "{w} missing from {bag:?}");
        }
    }

    #[test]
    fn doc_comment_and_method() {
        let src = "class A {\n/** Wakes the screen */\nvoid wakeScreen(int delay) {\n  helper(delay);\n}\n}\n";
        let bag = extract_code_doc("A.java", src, &TextNormalizer::default());
        assert!(bag.contains_key("wake"));
        assert_eq!(bag["screen"], 2);
        assert!(!bag.contains_key("helper"));
        assert!(!bag.contains_key("delay"));
    }

    #[test]
    fn parts_of_a_class() {
        let src = r#"
package com.example;

/** Keeps the lock state. */
public class LockState {
    private static final int MAX_TRIES = 3;
    private String lastPattern;
    // unlockCount is a comment, not a field
    private final Map<String, Integer> attempts = new HashMap<>();

    /** Resets everything. */
    public void reset() {
        int local = 0;
        if (local == 0) { return; }
        String s = "fake = value;";
    }

    protected boolean isLocked(String who) throws IOException {
        return attempts.get(who) != null;
    }
}
"#;
        let parts = extract_code_parts("src/com/example/LockState.java", src);
        assert_eq!(parts.path_segments, ["src", "com", "example", "LockState"]);
        assert_eq!(parts.methods, ["reset", "isLocked"]);
        assert_eq!(parts.fields, ["MAX_TRIES", "lastPattern", "attempts"]);
        assert_eq!(parts.doc_comments.len(), 2);
    }

    #[test]
    fn kotlin_declarations() {
        let src = "class Player {\n    val volume = 5\n    var muted = false\n    fun togglePlayback(force: Boolean) {\n    }\n}\n";
        let parts = extract_code_parts("Player.kt", src);
        assert_eq!(parts.methods, ["togglePlayback"]);
        assert_eq!(parts.fields, ["volume", "muted"]);
    }

    #[test]
    fn no_doc_comments() {
        let parts = extract_code_parts("a/B.java", "class B { int count; }");
        assert!(parts.doc_comments.is_empty());
        assert_eq!(parts.fields, ["count"]);
    }

    #[test]
    fn scan_skips_hidden_and_non_source() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        std::fs::create_dir_all(root.join("src")).unwrap();
        std::fs::create_dir_all(root.join(".git")).unwrap();
        std::fs::write(root.join("src/Main.kt"), "fun main() {}").unwrap();
        std::fs::write(root.join("README.md"), "# hi").unwrap();
        std::fs::write(root.join(".git/config"), "x").unwrap();
        std::fs::write(root.join("src/blob.bin"), [0xffu8, 0xfe]).unwrap();
        let files = scan_source_tree(root, &super::super::commits::default_suffixes()).unwrap();
        let paths: Vec<_> = files.iter().map(|f| f.path.as_str()).collect();
        assert_eq!(paths, ["src/Main.kt"]);
    }
}
