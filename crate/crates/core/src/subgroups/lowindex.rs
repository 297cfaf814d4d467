//! Low-index subgroup enumeration by backtracking over partial coset tables
//! (Sims' method): entries are filled in row-major order, a new coset always
//! receives the next free number, relators are scanned to a deduction
//! fixpoint, and partial tables that are not lexicographically least among
//! their rebasings are pruned, so each conjugacy class appears exactly once.

use serde::{Deserialize, Serialize};

use super::coset::CosetTable;
use super::presentation::{letter_generator, Presentation};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_INDEX: usize = 16;
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

const UNDEF: usize = usize::MAX;

/// Outcome of a (possibly truncated) low-index search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct LowIndexSearch {
    pub max_index: usize,
    /// One table per conjugacy class, ordered by index then table.
    pub subgroups: Vec<CosetTable>,
    pub nodes: u64,
    pub node_budget: u64,
    /// `false` when the node budget ran out; `subgroups` is then a partial list.
    pub complete: bool,
}

#[derive(Clone)]
struct Partial {
    n: usize,
    table: Vec<Vec<usize>>, // table[c][col]
}

struct Search<'a> {
    max_index: usize,
    ncols: usize,
    inv_col: Vec<usize>,
    gen_col: Vec<usize>,
    relators: Vec<Vec<usize>>,
    p: &'a Presentation,
    nodes: u64,
    budget: u64,
    found: Vec<CosetTable>,
    exhausted: bool,
}

impl Search<'_> {
    /// Scans every relator at every coset until nothing changes.
    /// Returns `false` on a conflict.
    fn deduce(&self, t: &mut Partial) -> bool {
        loop {
            let mut changed = false;
            for c in 0..t.n {
                for r in &self.relators {
                    match self.scan(t, c, r) {
                        None => return false,
                        Some(ch) => changed |= ch,
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// `None` on conflict, `Some(true)` if a deduction was made.
    fn scan(&self, t: &mut Partial, c: usize, w: &[usize]) -> Option<bool> {
        let (mut f, mut i) = (c, 0usize);
        while i < w.len() && t.table[f][w[i]] != UNDEF {
            f = t.table[f][w[i]];
            i += 1;
        }
        if i == w.len() {
            return (f == c).then_some(false);
        }
        let (mut b, mut j) = (c, w.len());
        while j > i && t.table[b][self.inv_col[w[j - 1]]] != UNDEF {
            b = t.table[b][self.inv_col[w[j - 1]]];
            j -= 1;
        }
        if j == i {
            return (f == b).then_some(false);
        }
        if j == i + 1 {
            let x = w[i];
            let xi = self.inv_col[x];
            if t.table[b][xi] != UNDEF || t.table[f][x] != UNDEF {
                return None;
            }
            t.table[f][x] = b;
            t.table[b][xi] = f;
            return Some(true);
        }
        Some(false)
    }

    /// `true` if rebasing at some coset yields a lexicographically smaller
    /// standardized table on the defined prefix.
    fn beaten(&self, t: &Partial) -> bool {
        let mut map = vec![UNDEF; t.n];
        let mut seq = Vec::with_capacity(t.n);
        'base: for base in 1..t.n {
            map.iter_mut().for_each(|m| *m = UNDEF);
            seq.clear();
            map[base] = 0;
            seq.push(base);
            let mut next = 1;
            for i in 0..t.n {
                if i >= seq.len() {
                    continue 'base;
                }
                let o = seq[i];
                for x in 0..self.ncols {
                    let own = t.table[i][x];
                    let d = t.table[o][x];
                    if own == UNDEF || d == UNDEF {
                        continue 'base;
                    }
                    if map[d] == UNDEF {
                        map[d] = next;
                        next += 1;
                        seq.push(d);
                    }
                    match map[d].cmp(&own) {
                        std::cmp::Ordering::Less => return true,
                        std::cmp::Ordering::Greater => continue 'base,
                        std::cmp::Ordering::Equal => {}
                    }
                }
            }
        }
        false
    }

    fn first_undefined(&self, t: &Partial) -> Option<(usize, usize)> {
        (0..t.n).flat_map(|c| (0..self.ncols).map(move |x| (c, x))).find(|&(c, x)| t.table[c][x] == UNDEF)
    }

    fn run(&mut self, t: Partial) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let Some((c, x)) = self.first_undefined(&t) else {
            let action = (0..self.p.generators)
                .map(|g| t.table[..t.n].iter().map(|row| row[self.gen_col[g]]).collect())
                .collect();
            let table = CosetTable { index: t.n, action };
            debug_assert!(table.validate(self.p, &[]).is_ok());
            self.found.push(table);
            return;
        };
        let xi = self.inv_col[x];
        let targets = (0..t.n).filter(|&d| t.table[d][xi] == UNDEF).chain((t.n < self.max_index).then_some(t.n));
        for d in targets.collect::<Vec<_>>() {
            let mut next = t.clone();
            if d == next.n {
                next.n += 1;
                next.table[d].iter_mut().for_each(|e| *e = UNDEF);
            }
            next.table[c][x] = d;
            next.table[d][xi] = c;
            if self.deduce(&mut next) && !self.beaten(&next) {
                self.run(next);
            }
        }
    }
}

/// Searches for subgroups of index at most `max_index`, one per conjugacy
/// class, visiting at most `node_budget` search nodes.
pub fn low_index_search(p: &Presentation, max_index: usize, node_budget: u64) -> Result<LowIndexSearch> {
    if max_index == 0 {
        return Err(Error::Unsupported("max_index must be positive".into()));
    }
    let involutions = p.involutions();
    let mut inv_col = Vec::new();
    let mut gen_col = Vec::new();
    for &inv in &involutions {
        let c = inv_col.len();
        gen_col.push(c);
        if inv {
            inv_col.push(c);
        } else {
            inv_col.push(c + 1);
            inv_col.push(c);
        }
    }
    let ncols = inv_col.len();
    let col = |x: i32| {
        let g = letter_generator(x);
        if x > 0 || involutions[g] {
            gen_col[g]
        } else {
            gen_col[g] + 1
        }
    };
    let relators = p.relators.iter().map(|r| r.iter().map(|&x| col(x)).collect()).collect();
    let mut search = Search {
        max_index,
        ncols,
        inv_col,
        gen_col,
        relators,
        p,
        nodes: 0,
        budget: node_budget,
        found: Vec::new(),
        exhausted: false,
    };
    let mut root = Partial { n: 1, table: vec![vec![UNDEF; ncols]; max_index] };
    if search.deduce(&mut root) {
        search.run(root);
    }
    let mut subgroups = search.found;
    subgroups.sort_by(|a, b| a.index.cmp(&b.index).then_with(|| a.cmp(b)));
    Ok(LowIndexSearch { max_index, subgroups, nodes: search.nodes, node_budget, complete: !search.exhausted })
}

/// All subgroups of index at most `max_index` up to conjugacy; a
/// resource-limit error if the default node budget is exhausted.
pub fn low_index_subgroups(p: &Presentation, max_index: usize) -> Result<Vec<CosetTable>> {
    let s = low_index_search(p, max_index, DEFAULT_NODE_BUDGET)?;
    if !s.complete {
        return Err(Error::ResourceLimit { what: "low-index search nodes".into(), limit: DEFAULT_NODE_BUDGET as usize });
    }
    Ok(s.subgroups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterDiagram;
    use crate::subgroups::{coxeter_presentation, todd_coxeter};
    use std::collections::BTreeSet;

    #[test]
    fn symmetric_group_s3() {
        let p = coxeter_presentation(&CoxeterDiagram::path(&[3]).unwrap());
        let subs = low_index_subgroups(&p, 6).unwrap();
        let indices: Vec<usize> = subs.iter().map(|t| t.index).collect();
        assert_eq!(indices, vec![1, 2, 3, 6]);
        for t in &subs {
            t.validate(&p, &[]).unwrap();
        }
        assert_eq!(low_index_subgroups(&p, 1).unwrap().len(), 1);
    }

    #[test]
    fn whole_group_only_at_index_one() {
        let p = Presentation::new(2, vec![vec![1, 1, 1], vec![2, 2]]).unwrap();
        let subs = low_index_subgroups(&p, 1).unwrap();
        assert_eq!(subs, vec![CosetTable { index: 1, action: vec![vec![0], vec![0]] }]);
    }

    #[test]
    fn pentagon_group_index_two() {
        let p = coxeter_presentation(&CoxeterDiagram::lanner_pentagon());
        let subs = low_index_subgroups(&p, 2).unwrap();
        assert_eq!(subs.iter().map(|t| t.index).collect::<Vec<_>>(), vec![1, 2]);
    }

    /// Oracle: conjugacy classes of subgroups of a finite group, computed by
    /// brute force over the regular permutation representation.
    fn brute_force_classes(p: &Presentation, max_index: usize) -> BTreeSet<(usize, CosetTable)> {
        let reg = todd_coxeter(p, &[], 10_000).unwrap();
        let n = reg.index;
        // Element c is represented by its coset; multiplication by the
        // regular right action of words. Enumerate subgroups generated by
        // at most two elements, which covers every subgroup of these small groups.
        let words: Vec<Vec<i32>> = {
            let mut reps = vec![None; n];
            reps[0] = Some(vec![]);
            let mut queue = std::collections::VecDeque::from([0usize]);
            while let Some(c) = queue.pop_front() {
                for g in 0..p.generators {
                    let d = reg.action[g][c];
                    if reps[d].is_none() {
                        let mut w: Vec<i32> = reps[c].clone().unwrap();
                        w.push(g as i32 + 1);
                        reps[d] = Some(w);
                        queue.push_back(d);
                    }
                }
            }
            reps.into_iter().map(Option::unwrap).collect()
        };
        let mut out = BTreeSet::new();
        for a in 0..n {
            for b in a..n {
                let t = todd_coxeter(p, &[words[a].clone(), words[b].clone()], 10_000).unwrap();
                if t.index <= max_index {
                    out.insert((t.index, t.conjugacy_canonical()));
                }
            }
        }
        out
    }

    #[test]
    fn matches_brute_force_on_finite_groups() {
        for labels in [vec![4], vec![3, 3], vec![6], vec![5]] {
            let p = coxeter_presentation(&CoxeterDiagram::path(&labels).unwrap());
            for max_index in [4, 8] {
                let found: BTreeSet<(usize, CosetTable)> = low_index_subgroups(&p, max_index)
                    .unwrap()
                    .into_iter()
                    .map(|t| (t.index, t.conjugacy_canonical()))
                    .collect();
                let expected = brute_force_classes(&p, max_index);
                assert_eq!(found, expected, "labels {labels:?}, max_index {max_index}");
            }
        }
    }

    #[test]
    fn no_duplicate_classes_and_budget_truncation() {
        let p = coxeter_presentation(&CoxeterDiagram::lanner_pentagon());
        let full = low_index_search(&p, 6, DEFAULT_NODE_BUDGET).unwrap();
        assert!(full.complete);
        let canon: BTreeSet<CosetTable> = full.subgroups.iter().map(CosetTable::conjugacy_canonical).collect();
        assert_eq!(canon.len(), full.subgroups.len());
        for t in &full.subgroups {
            t.validate(&p, &[]).unwrap();
        }
        let cut = low_index_search(&p, 6, 3).unwrap();
        assert!(!cut.complete);
        assert_eq!(cut.nodes, 4);
    }
}
