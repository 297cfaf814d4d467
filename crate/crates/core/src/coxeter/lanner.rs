use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{cartan_from_diagram, signature, CoxeterDiagram, LABELS};
use crate::error::{Error, Result};

/// A diagram is elliptic when its symmetric Cartan matrix is positive definite.
pub fn is_elliptic(d: &CoxeterDiagram) -> Result<bool> {
    let c = cartan_from_diagram(d)?;
    Ok(signature(c.entries())?.is_positive_definite())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct SubdiagramClass {
    pub vertices: Vec<usize>,
    pub elliptic: bool,
}

/// Classifies every nonempty proper induced subdiagram, in order of the
/// bitmask of its vertex set.
pub fn classify_subdiagrams(d: &CoxeterDiagram) -> Result<Vec<SubdiagramClass>> {
    let n = d.rank();
    if n > 12 {
        return Err(Error::Unsupported(format!("subdiagram enumeration needs rank <= 12, got {n}")));
    }
    let full = (1u32 << n) - 1;
    (1..full)
        .map(|mask| {
            let vertices: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let elliptic = is_elliptic(&d.induced(&vertices))?;
            Ok(SubdiagramClass { vertices, elliptic })
        })
        .collect()
}

/// Compact hyperbolic simplex test: Lorentzian signature with every proper
/// induced subdiagram elliptic.
///
/// Only the maximal proper subdiagrams are tested, since principal
/// submatrices of a positive definite matrix are positive definite.
pub fn is_lanner(d: &CoxeterDiagram) -> Result<bool> {
    let comps = d.components();
    if comps.len() != 1 {
        return Err(Error::Disconnected(comps));
    }
    let n = d.rank();
    for drop in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&i| i != drop).collect();
        if !rest.is_empty() && !is_elliptic(&d.induced(&rest))? {
            return Ok(false);
        }
    }
    let sig = signature(cartan_from_diagram(d)?.entries())?;
    Ok(sig.is_lorentzian() && n >= 2)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, schemars::JsonSchema)]
pub struct EnumerationStats {
    pub nodes: u64,
    pub elliptic_tests: u64,
    pub memo_hits: u64,
    pub leaves: u64,
}

struct Search {
    n: usize,
    diagram: CoxeterDiagram,
    edges: Vec<(usize, usize)>,
    memo: HashMap<Vec<u32>, bool>,
    found: BTreeMap<Vec<u32>, CoxeterDiagram>,
    stats: EnumerationStats,
}

impl Search {
    fn elliptic(&mut self, vertices: &[usize]) -> Result<bool> {
        let sub = self.diagram.induced(vertices);
        let key = sub.upper_labels();
        if let Some(&hit) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return Ok(hit);
        }
        self.stats.elliptic_tests += 1;
        let value = is_elliptic(&sub)?;
        self.memo.insert(key, value);
        Ok(value)
    }

    fn leaf(&mut self) -> Result<()> {
        self.stats.leaves += 1;
        if !self.diagram.is_connected() {
            return Ok(());
        }
        for drop in 0..self.n {
            let rest: Vec<usize> = (0..self.n).filter(|&i| i != drop).collect();
            if !self.elliptic(&rest)? {
                return Ok(());
            }
        }
        let sig = signature(cartan_from_diagram(&self.diagram)?.entries())?;
        if sig.is_lorentzian() {
            let canon = self.diagram.canonical();
            self.found.entry(canon.upper_labels()).or_insert(canon);
        }
        Ok(())
    }

    fn descend(&mut self, idx: usize) -> Result<()> {
        if idx == self.edges.len() {
            return self.leaf();
        }
        let (j, k) = self.edges[idx];
        for m in LABELS {
            self.stats.nodes += 1;
            self.diagram.set_label(j, k, m)?;
            let mut subset: Vec<usize> = (0..=j).collect();
            subset.push(k);
            if subset.len() < self.n && !self.elliptic(&subset)? {
                continue;
            }
            self.descend(idx + 1)?;
        }
        self.diagram.set_label(j, k, 2)?;
        Ok(())
    }
}

/// All Lannér diagrams of the given rank with labels in {2, ..., 6}, one per
/// isomorphism class, in canonical form and sorted by canonical labels.
pub fn enumerate_lanner(rank: usize) -> Result<Vec<CoxeterDiagram>> {
    Ok(enumerate_lanner_with_stats(rank)?.0)
}

pub fn enumerate_lanner_with_stats(rank: usize) -> Result<(Vec<CoxeterDiagram>, EnumerationStats)> {
    if !(4..=6).contains(&rank) {
        return Err(Error::Unsupported(format!("Lannér enumeration supports rank 4, 5 or 6, got {rank}")));
    }
    let edges = (1..rank).flat_map(|k| (0..k).map(move |j| (j, k))).collect();
    let mut search = Search {
        n: rank,
        diagram: CoxeterDiagram::discrete(rank)?,
        edges,
        memo: HashMap::new(),
        found: BTreeMap::new(),
        stats: EnumerationStats::default(),
    };
    search.descend(0)?;
    Ok((search.found.into_values().collect(), search.stats))
}

/// Keeps the diagrams whose labels all lie in {2, 3, 4, 6}, i.e. those with
/// `4 cos²(π/m)` an integer for every label.
pub fn integrality_filter(ds: &[CoxeterDiagram]) -> Vec<CoxeterDiagram> {
    ds.iter()
        .filter(|d| d.upper_labels().iter().all(|m| matches!(m, 2 | 3 | 4 | 6)))
        .cloned()
        .collect()
}


#[cfg(test)]
mod enumeration_tests {
    use super::*;

    #[test]
    fn rank_five_has_five_and_contains_pentagon() {
        let (found, stats) = enumerate_lanner_with_stats(5).unwrap();
        eprintln!("rank 5 stats: {stats:?}");
        assert_eq!(found.len(), 5);
        let sigma = CoxeterDiagram::lanner_pentagon();
        assert!(found.iter().any(|d| d.is_isomorphic(&sigma)));
        assert_eq!(integrality_filter(&found).len(), 1);
        assert!(integrality_filter(&found)[0].is_isomorphic(&sigma));
    }

    #[test]
    fn rank_six_is_empty() {
        let (found, stats) = enumerate_lanner_with_stats(6).unwrap();
        eprintln!("rank 6 stats: {stats:?}");
        assert!(found.is_empty());
    }
}
