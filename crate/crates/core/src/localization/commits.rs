use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::io::{read_json_lines, Loaded};

/// Paths with these endings never count as source changes.
pub const DEFAULT_NON_SOURCE_SUFFIXES: &[&str] = &[".html", ".properties", ".md", ".txt", ".png"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitRecord {
    pub sha: String,
    pub title: String,
    #[serde(default)]
    pub description: String,
    pub timestamp: DateTime<Utc>,
    pub files: Vec<String>,
}

#[derive(Deserialize)]
struct RawCommit {
    sha: String,
    #[serde(default)]
    title: String,
    #[serde(default)]
    description: Option<String>,
    timestamp: String,
    #[serde(default)]
    files: Vec<String>,
}

/// Commits as loaded, plus how many parsed records were discarded for
/// touching no source file.
#[derive(Debug, Clone, PartialEq)]
pub struct CommitLoad {
    pub commits: Vec<CommitRecord>,
    pub skipped: usize,
    pub non_source: usize,
}

pub fn is_source_path(path: &str, non_source_suffixes: &[String]) -> bool {
    let lower = path.to_ascii_lowercase();
    !non_source_suffixes
        .iter()
        .any(|s| lower.ends_with(&s.to_ascii_lowercase()))
}

/// Reads a JSON-Lines commit dump, keeping only source paths and dropping
/// commits left with none. Malformed lines are skipped and counted.
pub fn load_commits(path: &Path, non_source_suffixes: &[String]) -> Result<CommitLoad> {
    let Loaded { records, skipped } = read_json_lines(path, |raw: RawCommit| {
        let timestamp = DateTime::parse_from_rfc3339(&raw.timestamp)
            .map_err(|e| format!("commit {}: bad timestamp {:?}: {e}", raw.sha, raw.timestamp))?
            .with_timezone(&Utc);
        Ok(CommitRecord {
            sha: raw.sha,
            title: raw.title,
            description: raw.description.unwrap_or_default(),
            timestamp,
            files: raw.files.into_iter().map(|f| normalize_path(&f)).collect(),
        })
    })?;
    let before = records.len();
    let commits = filter_source_commits(records, non_source_suffixes);
    let non_source = before - commits.len();
    if non_source > 0 {
        log::info!("{}: dropped {non_source} commit(s) touching no source file", path.display());
    }
    Ok(CommitLoad {
        commits,
        skipped,
        non_source,
    })
}

pub fn filter_source_commits(commits: Vec<CommitRecord>, non_source_suffixes: &[String]) -> Vec<CommitRecord> {
    commits
        .into_iter()
        .filter_map(|mut c| {
            c.files.retain(|f| is_source_path(f, non_source_suffixes));
            (!c.files.is_empty()).then_some(c)
        })
        .collect()
}

/// Repo-relative path with forward slashes and no leading `./` or `/`.
pub fn normalize_path(path: &str) -> String {
    let p = path.replace('\\', "/");
    let mut p = p.as_str();
    loop {
        if let Some(rest) = p.strip_prefix("./") {
            p = rest;
        } else if let Some(rest) = p.strip_prefix('/') {
            p = rest;
        } else {
            break;
        }
    }
    p.to_string()
}

pub fn default_suffixes() -> Vec<String> {
    DEFAULT_NON_SOURCE_SUFFIXES.iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(lines: &[&str]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        use std::io::Write;
        for l in lines {
            writeln!(f, "{l}").unwrap();
        }
        f
    }

    #[test]
    fn drops_docs_only_commits() {
        let f = write(&[
            r#"{"sha":"a","title":"docs","description":"","timestamp":"2020-01-01T00:00:00Z","files":["README.md"]}"#,
            r#"{"sha":"b","title":"fix","description":"x","timestamp":"2020-01-02T00:00:00Z","files":["src/Foo.kt","notes.md"]}"#,
            r#"not json"#,
            r#"{"sha":"c","title":"bad","timestamp":"yesterday","files":["A.java"]}"#,
        ]);
        let load = load_commits(f.path(), &default_suffixes()).unwrap();
        assert_eq!(load.commits.len(), 1);
        assert_eq!(load.commits[0].files, ["src/Foo.kt"]);
        assert_eq!(load.skipped, 2);
        assert_eq!(load.non_source, 1);
    }

    #[test]
    fn empty_dump_is_empty() {
        let f = write(&[]);
        let load = load_commits(f.path(), &default_suffixes()).unwrap();
        assert!(load.commits.is_empty());
    }

    #[test]
    fn suffix_match_is_case_insensitive() {
        assert!(!is_source_path("res/Logo.PNG", &default_suffixes()));
        assert!(is_source_path("src/Main.java", &default_suffixes()));
        assert_eq!(normalize_path("./src\\a.kt"), "src/a.kt");
    }
}
