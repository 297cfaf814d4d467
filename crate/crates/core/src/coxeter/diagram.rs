use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Labels allowed on diagram edges. `2` means "no edge".
pub const LABELS: [u32; 5] = [2, 3, 4, 5, 6];

/// Coxeter diagram stored as its symmetric label matrix `m`, with `m_ii = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, schemars::JsonSchema)]
pub struct CoxeterDiagram {
    rank: usize,
    labels: Vec<Vec<u32>>,
}

impl CoxeterDiagram {
    /// Diagram with no edges (all off-diagonal labels 2).
    pub fn discrete(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidDiagram("rank must be positive".into()));
        }
        let labels = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { 1 } else { 2 }).collect())
            .collect();
        Ok(CoxeterDiagram { rank, labels })
    }

    pub fn from_labels(labels: Vec<Vec<u32>>) -> Result<Self> {
        let rank = labels.len();
        if rank == 0 {
            return Err(Error::InvalidDiagram("rank must be positive".into()));
        }
        for (i, row) in labels.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, got: row.len() });
            }
            for (j, &m) in row.iter().enumerate() {
                if i == j {
                    if m != 1 {
                        return Err(Error::InvalidDiagram(format!("diagonal label m[{i}][{i}] = {m}, expected 1")));
                    }
                } else {
                    if m != labels[j][i] {
                        return Err(Error::InvalidDiagram(format!("labels not symmetric at ({i}, {j})")));
                    }
                    if !LABELS.contains(&m) {
                        return Err(Error::UnsupportedLabel(m));
                    }
                }
            }
        }
        Ok(CoxeterDiagram { rank, labels })
    }

    /// Builds a diagram from 0-based `(i, j, m)` edges.
    pub fn from_edges(rank: usize, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let mut d = Self::discrete(rank)?;
        for &(i, j, m) in edges {
            d.set_label(i, j, m)?;
        }
        Ok(d)
    }

    /// Linear diagram `o-m0-o-m1-o ...`.
    pub fn path(labels: &[u32]) -> Result<Self> {
        let edges: Vec<_> = labels.iter().enumerate().map(|(i, &m)| (i, i + 1, m)).collect();
        Self::from_edges(labels.len() + 1, &edges)
    }

    /// The pentagon with labels 4, 3, 3, 3, 3 around the cycle 1-2-3-4-5-1:
    /// the only rank-5 Lannér diagram with all labels in {2, 3, 4, 6}.
    pub fn lanner_pentagon() -> Self {
        Self::from_edges(5, &[(0, 1, 4), (1, 2, 3), (2, 3, 3), (3, 4, 3), (4, 0, 3)])
            .expect("valid preset")
    }

    pub fn set_label(&mut self, i: usize, j: usize, m: u32) -> Result<()> {
        if i >= self.rank || j >= self.rank {
            return Err(Error::IndexOutOfRange { index: i.max(j), len: self.rank });
        }
        if i == j {
            return Err(Error::InvalidDiagram(format!("self-loop at vertex {}", i + 1)));
        }
        if !LABELS.contains(&m) {
            return Err(Error::UnsupportedLabel(m));
        }
        self.labels[i][j] = m;
        self.labels[j][i] = m;
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self, i: usize, j: usize) -> u32 {
        self.labels[i][j]
    }

    pub fn labels(&self) -> &[Vec<u32>] {
        &self.labels
    }

    pub fn max_label(&self) -> u32 {
        self.labels.iter().flatten().copied().max().unwrap_or(1)
    }

    /// Induced subdiagram on the given vertices, in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let labels = vertices
            .iter()
            .map(|&i| vertices.iter().map(|&j| self.labels[i][j]).collect())
            .collect();
        CoxeterDiagram { rank: vertices.len(), labels }
    }

    /// Connected components of the graph whose edges are labels `>= 3`.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adjacency: Vec<Vec<bool>> = (0..self.rank)
            .map(|i| (0..self.rank).map(|j| i != j && self.labels[i][j] > 2).collect())
            .collect();
        components_of(&adjacency)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Labels above the diagonal in row-major order.
    pub fn upper_labels(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.rank * (self.rank - 1) / 2);
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                out.push(self.labels[i][j]);
            }
        }
        out
    }

    /// Representative of the isomorphism class: the relabeling whose upper
    /// label sequence is lexicographically smallest.
    pub fn canonical(&self) -> CoxeterDiagram {
        let mut perm: Vec<usize> = (0..self.rank).collect();
        let mut best = self.induced(&perm);
        let mut best_key = best.upper_labels();
        for_each_permutation(&mut perm, 0, &mut |p| {
            let key = upper_labels_under(self, p);
            if key < best_key {
                best_key = key;
                best = self.induced(p);
            }
        });
        best
    }

    pub fn is_isomorphic(&self, other: &CoxeterDiagram) -> bool {
        self.rank == other.rank && self.canonical() == other.canonical()
    }

    /// Parses the text format: a `rank = n` line, then `edge i j m` lines with
    /// 1-based vertices. `#` starts a comment; unlisted pairs get label 2.
    pub fn parse(text: &str) -> Result<Self> {
        let mut diagram: Option<CoxeterDiagram> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: line_no, msg };
            if let Some(rest) = line.strip_prefix("rank") {
                let value = rest.trim().strip_prefix('=').ok_or_else(|| err("expected `rank = n`".into()))?;
                let rank: usize = value.trim().parse().map_err(|_| err(format!("bad rank {:?}", value.trim())))?;
                if diagram.is_some() {
                    return Err(err("duplicate rank line".into()));
                }
                diagram = Some(Self::discrete(rank).map_err(|e| err(e.to_string()))?);
            } else if let Some(rest) = line.strip_prefix("edge") {
                let d = diagram.as_mut().ok_or_else(|| err("edge before rank line".into()))?;
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(err(format!("expected `edge i j m`, got {line:?}")));
                }
                let nums: Vec<u32> = fields
                    .iter()
                    .map(|f| f.parse::<u32>().map_err(|_| err(format!("bad number {f:?}"))))
                    .collect::<Result<_>>()?;
                let (i, j, m) = (nums[0] as usize, nums[1] as usize, nums[2]);
                if i == 0 || j == 0 || i > d.rank || j > d.rank {
                    return Err(err(format!("vertex out of range 1..={}", d.rank)));
                }
                if !LABELS.contains(&m) {
                    return Err(err(format!("unsupported label {m}; supported labels are 2, 3, 4, 5, 6")));
                }
                let previous = d.labels[i - 1][j - 1];
                if previous != 2 && previous != m {
                    return Err(err(format!("conflicting labels {previous} and {m} for edge {i} {j}")));
                }
                d.set_label(i - 1, j - 1, m).map_err(|e| err(e.to_string()))?;
            } else {
                return Err(err(format!("unrecognized line {line:?}")));
            }
        }
        diagram.ok_or(Error::Parse { line: 0, msg: "missing `rank = n` line".into() })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("rank = {}\n", self.rank);
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                if self.labels[i][j] != 2 {
                    let _ = writeln!(out, "edge {} {} {}", i + 1, j + 1, self.labels[i][j]);
                }
            }
        }
        out
    }
}

fn upper_labels_under(d: &CoxeterDiagram, p: &[usize]) -> Vec<u32> {
    let n = p.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(d.labels[p[i]][p[j]]);
        }
    }
    out
}

fn for_each_permutation(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        for_each_permutation(p, k + 1, f);
        p.swap(k, i);
    }
}

pub(crate) fn components_of(adjacency: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adjacency.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            let v = comp[k];
            for w in 0..n {
                if adjacency[v][w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
