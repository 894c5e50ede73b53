//! Review mining toolkit: segments app reviews into atomic concerns, clusters
//! them with pairwise constraints, and localizes the source files each
//! concern is likely to touch using code text and commit history.

pub mod clustering;
pub mod config;
pub mod error;
pub mod evaluation;
pub mod ingest;
pub mod localization;
pub mod io;
pub mod pipeline;
pub mod segment;
pub mod textproc;
pub mod vsm;

pub use error::{Error, Result};
