use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unordered document pair, stored with the smaller id first.
pub type Pair = (String, String);

fn ordered(a: &str, b: &str) -> Pair {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Must-link and cannot-link pairs over document ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    must: BTreeSet<Pair>,
    cannot: BTreeSet<Pair>,
}

#[derive(Serialize, Deserialize)]
struct ConstraintFile {
    #[serde(default)]
    must: Vec<(String, String)>,
    #[serde(default)]
    cannot: Vec<(String, String)>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_must(&mut self, a: &str, b: &str) -> Result<()> {
        let pair = check_pair(a, b)?;
        if self.cannot.contains(&pair) {
            return Err(Error::InconsistentConstraints { a: pair.0, b: pair.1 });
        }
        self.must.insert(pair);
        Ok(())
    }

    pub fn add_cannot(&mut self, a: &str, b: &str) -> Result<()> {
        let pair = check_pair(a, b)?;
        if self.must.contains(&pair) {
            return Err(Error::InconsistentConstraints { a: pair.0, b: pair.1 });
        }
        self.cannot.insert(pair);
        Ok(())
    }

    pub fn must(&self) -> &BTreeSet<Pair> {
        &self.must
    }

    pub fn cannot(&self) -> &BTreeSet<Pair> {
        &self.cannot
    }

    pub fn is_empty(&self) -> bool {
        self.must.is_empty() && self.cannot.is_empty()
    }

    pub fn has_must(&self, a: &str, b: &str) -> bool {
        self.must.contains(&ordered(a, b))
    }

    pub fn has_cannot(&self, a: &str, b: &str) -> bool {
        self.cannot.contains(&ordered(a, b))
    }

    /// Reads `{"must": [[id, id], ...], "cannot": [[id, id], ...]}`.
    pub fn load(path: &Path) -> Result<Self> {
        let file: ConstraintFile = crate::io::read_json(path)?;
        let mut set = ConstraintSet::new();
        for (a, b) in &file.must {
            set.add_must(a, b)?;
        }
        for (a, b) in &file.cannot {
            set.add_cannot(a, b)?;
        }
        Ok(set)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ConstraintFile {
            must: self.must.iter().cloned().collect(),
            cannot: self.cannot.iter().cloned().collect(),
        })
        .expect("constraint pairs serialize")
    }

    /// Keeps only pairs whose both ends are in `ids`. Returns the restricted
    /// set and the number of pairs dropped.
    pub fn restrict_to(&self, ids: &HashSet<&str>) -> (ConstraintSet, usize) {
        let keep = |p: &&Pair| ids.contains(p.0.as_str()) && ids.contains(p.1.as_str());
        let must: BTreeSet<Pair> = self.must.iter().filter(keep).cloned().collect();
        let cannot: BTreeSet<Pair> = self.cannot.iter().filter(keep).cloned().collect();
        let dropped = self.must.len() + self.cannot.len() - must.len() - cannot.len();
        (ConstraintSet { must, cannot }, dropped)
    }

    /// Transitive closure of must-links, with cannot-links lifted to every
    /// cross pair of the two must-link components they connect.
    pub fn close(&self) -> Result<ConstraintSet> {
        let mut uf = UnionFind::default();
        for (a, b) in &self.must {
            uf.union(a, b);
        }
        for (a, b) in &self.cannot {
            uf.find(a);
            uf.find(b);
        }
        let components = uf.components();

        let mut must = BTreeSet::new();
        for members in components.values() {
            for (i, a) in members.iter().enumerate() {
                for b in &members[i + 1..] {
                    must.insert(ordered(a, b));
                }
            }
        }

        let mut cannot = BTreeSet::new();
        for (a, b) in &self.cannot {
            let (ra, rb) = (uf.find(a), uf.find(b));
            if ra == rb {
                return Err(Error::InconsistentConstraints {
                    a: a.clone(),
                    b: b.clone(),
                });
            }
            for x in &components[&ra] {
                for y in &components[&rb] {
                    cannot.insert(ordered(x, y));
                }
            }
        }
        Ok(ConstraintSet { must, cannot })
    }
}

fn check_pair(a: &str, b: &str) -> Result<Pair> {
    if a == b {
        return Err(Error::InvalidInput(format!("constraint pairs {a} with itself")));
    }
    Ok(ordered(a, b))
}

#[derive(Default)]
struct UnionFind {
    parent: BTreeMap<String, String>,
}

impl UnionFind {
    fn find(&mut self, x: &str) -> String {
        let mut root = x.to_string();
        loop {
            match self.parent.get(&root) {
                Some(p) if *p != root => root = p.clone(),
                Some(_) => break,
                None => {
                    self.parent.insert(root.clone(), root.clone());
                    break;
                }
            }
        }
        let mut cur = x.to_string();
        while cur != root {
            let next = self.parent.insert(cur, root.clone()).expect("visited node");
            cur = next;
        }
        root
    }

    fn union(&mut self, a: &str, b: &str) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller id becomes the root so the result is order independent.
            let (root, child) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent.insert(child, root);
        }
    }

    fn components(&mut self) -> BTreeMap<String, Vec<String>> {
        let keys: Vec<String> = self.parent.keys().cloned().collect();
        let mut out: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for k in keys {
            let r = self.find(&k);
            out.entry(r).or_default().push(k);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(must: &[(&str, &str)], cannot: &[(&str, &str)]) -> ConstraintSet {
        let mut s = ConstraintSet::new();
        for (a, b) in must {
            s.add_must(a, b).unwrap();
        }
        for (a, b) in cannot {
            s.add_cannot(a, b).unwrap();
        }
        s
    }

    #[test]
    fn cannot_lifts_through_must() {
        let closed = set(&[("a", "b")], &[("b", "c")]).close().unwrap();
        assert!(closed.has_cannot("a", "c"));
        assert!(closed.has_cannot("b", "c"));
    }

    #[test]
    fn empty_is_identity() {
        assert_eq!(ConstraintSet::new().close().unwrap(), ConstraintSet::new());
    }

    #[test]
    fn must_is_transitive() {
        let closed = set(&[("a", "b"), ("b", "c")], &[]).close().unwrap();
        assert!(closed.has_must("a", "c"));
        assert_eq!(closed.must().len(), 3);
    }

    #[test]
    fn inconsistency_is_reported() {
        let err = set(&[("a", "b"), ("b", "c")], &[("a", "c")]).close().unwrap_err();
        match err {
            Error::InconsistentConstraints { a, b } => assert_eq!((a.as_str(), b.as_str()), ("a", "c")),
            e => panic!("unexpected {e}"),
        }
        let mut s = set(&[("x", "y")], &[]);
        assert!(s.add_cannot("y", "x").is_err());
        assert!(s.add_must("z", "z").is_err());
    }

    #[test]
    fn restrict_drops_foreign_pairs() {
        let s = set(&[("a", "b"), ("a", "z")], &[("b", "c")]);
        let ids: HashSet<&str> = ["a", "b", "c"].into_iter().collect();
        let (r, dropped) = s.restrict_to(&ids);
        assert_eq!(dropped, 1);
        assert!(r.has_must("a", "b") && r.has_cannot("b", "c"));
    }

    #[test]
    fn loads_json() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        std::fs::write(&p, r#"{"must": [["d1","d2"]], "cannot": [["d2","d3"]]}"#).unwrap();
        let s = ConstraintSet::load(&p).unwrap();
        assert!(s.has_must("d2", "d1"));
        assert!(s.has_cannot("d3", "d2"));
    }

    proptest! {
        #[test]
        fn closure_invariants(
            must in proptest::collection::vec((0u8..10, 0u8..10), 0..12),
            cannot in proptest::collection::vec((0u8..10, 0u8..10), 0..12),
        ) {
            let mut raw = ConstraintSet::new();
            for (a, b) in must.iter().filter(|(a, b)| a != b) {
                raw.add_must(&a.to_string(), &b.to_string()).unwrap();
            }
            for (a, b) in cannot.iter().filter(|(a, b)| a != b) {
                let _ = raw.add_cannot(&a.to_string(), &b.to_string());
            }
            let Ok(closed) = raw.close() else { return Ok(()); };
            prop_assert!(closed.must().is_disjoint(closed.cannot()));
            prop_assert!(raw.must().is_subset(closed.must()));
            prop_assert!(raw.cannot().is_subset(closed.cannot()));
            let ids: Vec<String> = (0..10).map(|i| i.to_string()).collect();
            for a in &ids {
                for b in &ids {
                    for c in &ids {
                        if a == b || b == c || a == c {
                            continue;
                        }
                        if closed.has_must(a, b) && closed.has_must(b, c) {
                            prop_assert!(closed.has_must(a, c));
                        }
                        if closed.has_must(a, b) && closed.has_cannot(b, c) {
                            prop_assert!(closed.has_cannot(a, c));
                        }
                    }
                }
            }
            prop_assert_eq!(closed.close().unwrap(), closed);
        }
    }
}
