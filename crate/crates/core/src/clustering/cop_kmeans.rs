use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::constraints::ConstraintSet;
use crate::error::{Error, Result};
use crate::vsm::ReducedDataSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopKmeansParams {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Extra attempts with derived seeds after an infeasible assignment pass.
    pub restarts: usize,
}

impl CopKmeansParams {
    pub fn new(k: usize, seed: u64) -> Self {
        CopKmeansParams {
            k,
            seed,
            max_iter: 100,
            restarts: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub k: usize,
    pub ids: Vec<String>,
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub iterations: usize,
    /// Seed of the attempt that produced this result.
    pub seed: u64,
    pub attempts: usize,
}

impl ClusterAssignment {
    pub fn members(&self, cluster: usize) -> impl Iterator<Item = usize> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(move |(_, &l)| l == cluster)
            .map(|(i, _)| i)
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Within-cluster sum of squared distances to the centroids.
    pub fn inertia(&self, data: &ReducedDataSet) -> f64 {
        data.points
            .iter()
            .zip(&self.labels)
            .map(|(p, &l)| sq_dist(p, &self.centroids[l]))
            .sum()
    }
}

pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Seed used by attempt `attempt` (attempt 0 uses `seed` itself).
pub fn attempt_seed(seed: u64, attempt: usize) -> u64 {
    seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Indices of the `k` distinct points used as initial centers.
pub fn initial_centers(m: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rand::seq::index::sample(&mut rng, m, k).into_vec()
}

/// Per-point constraint partners by index.
struct Links {
    must: Vec<Vec<usize>>,
    cannot: Vec<Vec<usize>>,
}

impl Links {
    fn build(ids: &[String], constraints: &ConstraintSet) -> Result<Self> {
        let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("constraint references unknown document {id}")))
        };
        let mut must = vec![Vec::new(); ids.len()];
        let mut cannot = vec![Vec::new(); ids.len()];
        for (a, b) in constraints.must() {
            let (i, j) = (lookup(a)?, lookup(b)?);
            must[i].push(j);
            must[j].push(i);
        }
        for (a, b) in constraints.cannot() {
            let (i, j) = (lookup(a)?, lookup(b)?);
            cannot[i].push(j);
            cannot[j].push(i);
        }
        Ok(Links { must, cannot })
    }

    fn violates(&self, point: usize, cluster: usize, labels: &[Option<usize>]) -> bool {
        self.must[point]
            .iter()
            .any(|&j| labels[j].is_some_and(|l| l != cluster))
            || self.cannot[point].iter().any(|&j| labels[j] == Some(cluster))
    }
}

enum Attempt {
    Done(ClusterAssignment),
    Stuck(usize),
    Empty(usize),
}

/// Constrained k-means. Each pass visits points in order and puts each one
/// in the nearest cluster that breaks no must-link or cannot-link against the
/// points already placed in this pass; centroids then move to their members'
/// means. Passes repeat until the labels stop changing or `max_iter` is hit.
/// When some point has no admissible cluster, the run restarts from a fresh
/// seed, up to `restarts` times.
///
/// `constraints` should already be closed (see [`ConstraintSet::close`]).
pub fn cop_kmeans(
    data: &ReducedDataSet,
    constraints: &ConstraintSet,
    params: &CopKmeansParams,
) -> Result<ClusterAssignment> {
    let m = data.len();
    if params.k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    if params.k > m {
        return Err(Error::Parameter(format!("k = {} exceeds the {m} available points", params.k)));
    }
    if params.max_iter == 0 {
        return Err(Error::Parameter("max_iter must be at least 1".into()));
    }
    let links = Links::build(&data.ids, constraints)?;

    let attempts = params.restarts + 1;
    let mut last_failure = Attempt::Stuck(0);
    for attempt in 0..attempts {
        let seed = attempt_seed(params.seed, attempt);
        match run_once(data, &links, params, seed, attempt + 1) {
            Attempt::Done(a) => return Ok(a),
            failure => {
                if let Attempt::Stuck(i) = failure {
                    log::debug!("attempt {} stuck on {}", attempt + 1, data.ids[i]);
                }
                last_failure = failure;
            }
        }
    }
    Err(match last_failure {
        Attempt::Stuck(i) => Error::InfeasibleAssignment {
            doc_id: data.ids[i].clone(),
            attempts,
        },
        Attempt::Empty(cluster) => Error::EmptyCluster { cluster, attempts },
        Attempt::Done(_) => unreachable!(),
    })
}

fn run_once(
    data: &ReducedDataSet,
    links: &Links,
    params: &CopKmeansParams,
    seed: u64,
    attempt: usize,
) -> Attempt {
    let k = params.k;
    let mut centroids: Vec<Vec<f64>> = initial_centers(data.len(), k, seed)
        .into_iter()
        .map(|i| data.points[i].clone())
        .collect();
    let mut prev: Option<Vec<usize>> = None;
    let mut iterations = 0;
    for _ in 0..params.max_iter {
        iterations += 1;
        let labels = match assign(data, links, &centroids) {
            Ok(l) => l,
            Err(stuck) => return Attempt::Stuck(stuck),
        };
        centroids = update_centroids(data, &labels, &centroids);
        let converged = prev.as_ref() == Some(&labels);
        prev = Some(labels);
        if converged {
            break;
        }
    }
    let labels = prev.expect("at least one pass ran");
    let mut sizes = vec![0usize; k];
    for &l in &labels {
        sizes[l] += 1;
    }
    if let Some(empty) = sizes.iter().position(|&s| s == 0) {
        return Attempt::Empty(empty);
    }
    Attempt::Done(ClusterAssignment {
        k,
        ids: data.ids.clone(),
        labels,
        centroids,
        iterations,
        seed,
        attempts: attempt,
    })
}

/// One assignment pass. Returns the index of the first point with no
/// admissible cluster on failure.
fn assign(data: &ReducedDataSet, links: &Links, centroids: &[Vec<f64>]) -> std::result::Result<Vec<usize>, usize> {
    let mut labels: Vec<Option<usize>> = vec![None; data.len()];
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(centroids.len());
    for (i, x) in data.points.iter().enumerate() {
        order.clear();
        order.extend(centroids.iter().enumerate().map(|(j, c)| (sq_dist(x, c), j)));
        // Equidistant clusters resolve to the lowest index.
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let chosen = order
            .iter()
            .map(|&(_, j)| j)
            .find(|&j| !links.violates(i, j, &labels))
            .ok_or(i)?;
        labels[i] = Some(chosen);
    }
    Ok(labels.into_iter().map(|l| l.expect("every point assigned")).collect())
}

/// Moves each centroid to its members' mean. An empty cluster is re-seeded
/// at the point farthest from its nearest non-empty centroid.
pub(crate) fn update_centroids(data: &ReducedDataSet, labels: &[usize], old: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = old.len();
    let dim = data.points.first().map_or(0, Vec::len);
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &l) in data.points.iter().zip(labels) {
        counts[l] += 1;
        for (s, v) in sums[l].iter_mut().zip(p) {
            *s += v;
        }
    }
    let mut centroids: Vec<Vec<f64>> = sums
        .into_iter()
        .zip(&counts)
        .zip(old)
        .map(|((s, &c), o)| {
            if c == 0 {
                o.clone()
            } else {
                s.into_iter().map(|v| v / c as f64).collect()
            }
        })
        .collect();
    let mut taken: Vec<usize> = Vec::new();
    for j in (0..k).filter(|&j| counts[j] == 0) {
        let live: Vec<&Vec<f64>> = (0..k).filter(|&c| counts[c] > 0).map(|c| &centroids[c]).collect();
        let far = data
            .points
            .iter()
            .enumerate()
            .filter(|(i, _)| !taken.contains(i))
            .map(|(i, p)| {
                let d = live.iter().map(|c| sq_dist(p, c)).fold(f64::INFINITY, f64::min);
                (d, i)
            })
            .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        if let Some((_, i)) = far {
            taken.push(i);
            centroids[j] = data.points[i].clone();
        }
    }
    centroids
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(points: &[&[f64]]) -> ReducedDataSet {
        ReducedDataSet::from_points(
            (0..points.len()).map(|i| format!("d{i}")).collect(),
            points.iter().map(|p| p.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_cluster_centroid_is_mean() {
        let data = dataset(&[&[0.0, 0.0], &[2.0, 0.0], &[1.0, 3.0]]);
        let a = cop_kmeans(&data, &ConstraintSet::new(), &CopKmeansParams::new(1, 7)).unwrap();
        assert_eq!(a.labels, [0, 0, 0]);
        assert!((a.centroids[0][0] - 1.0).abs() < 1e-12);
        assert!((a.centroids[0][1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coincident_cannot_link_separates() {
        let data = dataset(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let mut c = ConstraintSet::new();
        c.add_cannot("d0", "d1").unwrap();
        let a = cop_kmeans(&data, &c, &CopKmeansParams::new(2, 3)).unwrap();
        assert_ne!(a.labels[0], a.labels[1]);
    }

    #[test]
    fn coincident_cannot_link_with_one_cluster_is_infeasible() {
        let data = dataset(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let mut c = ConstraintSet::new();
        c.add_cannot("d0", "d1").unwrap();
        let err = cop_kmeans(&data, &c, &CopKmeansParams::new(1, 3)).unwrap_err();
        match err {
            Error::InfeasibleAssignment { doc_id, attempts } => {
                assert_eq!(doc_id, "d1");
                assert_eq!(attempts, 11);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn parameter_errors() {
        let data = dataset(&[&[0.0], &[1.0]]);
        let none = ConstraintSet::new();
        assert!(matches!(cop_kmeans(&data, &none, &CopKmeansParams::new(3, 0)), Err(Error::Parameter(_))));
        assert!(matches!(cop_kmeans(&data, &none, &CopKmeansParams::new(0, 0)), Err(Error::Parameter(_))));
        let mut c = ConstraintSet::new();
        c.add_must("d0", "nope").unwrap();
        assert!(matches!(cop_kmeans(&data, &c, &CopKmeansParams::new(1, 0)), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn must_link_pulls_point_across() {
        // d2 sits next to d3 but is must-linked to d0.
        let data = dataset(&[&[0.0], &[0.1], &[9.0], &[10.0], &[10.1]]);
        let mut c = ConstraintSet::new();
        c.add_must("d0", "d2").unwrap();
        for seed in 0..20 {
            let a = cop_kmeans(&data, &c.close().unwrap(), &CopKmeansParams::new(2, seed)).unwrap();
            assert_eq!(a.labels[0], a.labels[2]);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let data = dataset(&[&[0.0, 1.0], &[0.5, 0.2], &[5.0, 5.0], &[5.5, 4.0], &[9.0, 0.0], &[8.0, 1.0]]);
        let mut c = ConstraintSet::new();
        c.add_cannot("d0", "d1").unwrap();
        let p = CopKmeansParams::new(3, 42);
        assert_eq!(cop_kmeans(&data, &c, &p).unwrap(), cop_kmeans(&data, &c, &p).unwrap());
    }

    #[test]
    fn empty_cluster_repair_uses_farthest_point() {
        let data = dataset(&[&[0.0], &[1.0], &[10.0]]);
        let cents = update_centroids(&data, &[0, 0, 0], &[vec![0.0], vec![5.0]]);
        assert_eq!(cents[1], vec![10.0]);
    }

    #[test]
    fn centers_are_distinct_indices() {
        for seed in 0..50 {
            let mut c = initial_centers(10, 4, seed);
            c.sort();
            c.dedup();
            assert_eq!(c.len(), 4);
        }
    }
}
