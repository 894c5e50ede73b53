//! Constrained clustering of reduced review vectors.

mod constraints;
mod cop_kmeans;
mod infer_k;

pub use constraints::{ConstraintSet, Pair};
pub use cop_kmeans::{attempt_seed, sq_dist, cop_kmeans, initial_centers, ClusterAssignment, CopKmeansParams};
pub use infer_k::{infer_k, KEstimate, SharedWordRule};
