//! Ranking source files for a review by code text and commit history.

mod code;
mod commits;
mod rank;

pub use code::{extract_code_doc, extract_code_parts, scan_source_tree, split_identifier, CodeParts, SourceFile, WordBag};
pub use commits::{
    default_suffixes, filter_source_commits, is_source_path, load_commits, normalize_path, CommitLoad,
    CommitRecord, DEFAULT_NON_SOURCE_SUFFIXES,
};
pub use rank::{
    dice_sim, interpolated_sim, rank_files, tag_files, CommitEntry, FilePair, LocalizationIndex,
    LocalizationRanking, RankedFile, Similarity,
};
