//! Coset tables and HLT coset enumeration with lookahead.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::presentation::{letter_generator, Presentation, Word};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

/// Complete permutation action of the generators on the cosets of a subgroup.
/// Coset 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, schemars::JsonSchema)]
pub struct CosetTable {
    pub index: usize,
    /// `action[g][c]` is the coset `c · g`.
    pub action: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn generators(&self) -> usize {
        self.action.len()
    }

    /// Inverse permutation of generator `g`.
    pub fn inverse_action(&self, g: usize) -> Vec<usize> {
        let mut inv = vec![0; self.index];
        for (c, &d) in self.action[g].iter().enumerate() {
            inv[d] = c;
        }
        inv
    }

    /// Image of a coset under a signed word.
    pub fn apply(&self, coset: usize, w: &[i32]) -> usize {
        w.iter().fold(coset, |c, &x| {
            let g = letter_generator(x);
            if x > 0 {
                self.action[g][c]
            } else {
                self.action[g].iter().position(|&d| d == c).expect("permutation")
            }
        })
    }

    /// Permutation induced by a signed word.
    pub fn word_permutation(&self, w: &[i32]) -> Vec<usize> {
        let inverses: Vec<Vec<usize>> = (0..self.generators()).map(|g| self.inverse_action(g)).collect();
        (0..self.index)
            .map(|c| {
                w.iter().fold(c, |c, &x| {
                    let g = letter_generator(x);
                    if x > 0 {
                        self.action[g][c]
                    } else {
                        inverses[g][c]
                    }
                })
            })
            .collect()
    }

    /// Checks that every generator acts by a permutation, every relator acts
    /// trivially on every coset, and the subgroup generators fix coset 0.
    pub fn validate(&self, p: &Presentation, subgens: &[Word]) -> Result<()> {
        if self.action.len() != p.generators {
            return Err(Error::DimensionMismatch { expected: p.generators, got: self.action.len() });
        }
        for (g, perm) in self.action.iter().enumerate() {
            let mut seen = vec![false; self.index];
            for &d in perm {
                if d >= self.index || std::mem::replace(&mut seen[d], true) {
                    return Err(Error::InvalidDiagram(format!("generator {g} does not act by a permutation")));
                }
            }
        }
        for r in &p.relators {
            if self.word_permutation(r).iter().enumerate().any(|(c, &d)| c != d) {
                return Err(Error::InvalidDiagram(format!("relator {r:?} acts nontrivially")));
            }
        }
        for w in subgens {
            if self.apply(0, w) != 0 {
                return Err(Error::InvalidDiagram(format!("subgroup generator {w:?} moves coset 0")));
            }
        }
        Ok(())
    }

    /// Renumbers cosets in breadth-first order from `base`, scanning
    /// generators in order; the result is the table of the stabilizer of
    /// `base` (a conjugate subgroup).
    pub fn rebased(&self, base: usize) -> CosetTable {
        let inverses: Vec<Vec<usize>> = (0..self.generators()).map(|g| self.inverse_action(g)).collect();
        let mut order = vec![usize::MAX; self.index];
        let mut queue = VecDeque::from([base]);
        order[base] = 0;
        let mut next = 1;
        let mut seq = vec![base];
        while let Some(c) = queue.pop_front() {
            for g in 0..self.generators() {
                for d in [self.action[g][c], inverses[g][c]] {
                    if order[d] == usize::MAX {
                        order[d] = next;
                        next += 1;
                        seq.push(d);
                        queue.push_back(d);
                    }
                }
            }
        }
        let action = (0..self.generators())
            .map(|g| seq.iter().map(|&c| order[self.action[g][c]]).collect())
            .collect();
        CosetTable { index: self.index, action }
    }

    /// Canonical representative of the conjugacy class of the subgroup:
    /// the least table over all rebasings.
    pub fn conjugacy_canonical(&self) -> CosetTable {
        (0..self.index).map(|b| self.rebased(b)).min().expect("nonempty table")
    }
}

const UNDEF: usize = usize::MAX;

/// Working table for HLT enumeration. Columns: one per involutory generator,
/// two (generator, inverse) otherwise.
struct Enumerator {
    ncols: usize,
    col_of: Vec<(usize, usize)>, // generator -> (column of g, column of g⁻¹)
    inv_col: Vec<usize>,
    table: Vec<usize>,
    parent: Vec<usize>,
    live_count: usize,
    max_cosets: usize,
}

impl Enumerator {
    fn new(p: &Presentation, max_cosets: usize) -> Self {
        let inv = p.involutions();
        let mut col_of = Vec::new();
        let mut inv_col = Vec::new();
        for &is_inv in inv.iter() {
            let c = inv_col.len();
            if is_inv {
                inv_col.push(c);
                col_of.push((c, c));
            } else {
                inv_col.push(c + 1);
                inv_col.push(c);
                col_of.push((c, c + 1));
            }
        }
        let ncols = inv_col.len();
        Enumerator { ncols, col_of, inv_col, table: vec![UNDEF; ncols], parent: vec![0], live_count: 1, max_cosets }
    }

    fn col(&self, letter: i32) -> usize {
        let (a, b) = self.col_of[letter_generator(letter)];
        if letter > 0 {
            a
        } else {
            b
        }
    }

    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.ncols + x]
    }

    fn set(&mut self, c: usize, x: usize, d: usize) {
        self.table[c * self.ncols + x] = d;
    }

    fn allocated(&self) -> usize {
        self.parent.len()
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> bool {
        if self.allocated() >= self.max_cosets {
            return false;
        }
        let d = self.allocated();
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(UNDEF, self.ncols));
        self.live_count += 1;
        self.set(c, x, d);
        self.set(d, self.inv_col[x], c);
        true
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut k = c;
        while self.parent[k] != r {
            let next = self.parent[k];
            self.parent[k] = r;
            k = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, drop) = (a.min(b), a.max(b));
        self.parent[drop] = keep;
        self.live_count -= 1;
        queue.push(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.ncols {
                let f = self.get(e, x);
                if f == UNDEF {
                    continue;
                }
                let xi = self.inv_col[x];
                if self.get(f, xi) == e {
                    self.set(f, xi, UNDEF);
                }
                let (e1, f1) = (self.rep(e), self.rep(f));
                if self.get(e1, x) != UNDEF {
                    let t = self.get(e1, x);
                    self.merge(f1, t, &mut queue);
                } else if self.get(f1, xi) != UNDEF {
                    let t = self.get(f1, xi);
                    self.merge(e1, t, &mut queue);
                } else {
                    self.set(e1, x, f1);
                    self.set(f1, xi, e1);
                }
            }
        }
    }

    /// Traces `w` from `c` in both directions; fills gaps by definitions when
    /// `fill`. Returns `false` only if a needed definition hit the bound.
    fn scan(&mut self, c: usize, w: &[usize], fill: bool) -> bool {
        if w.is_empty() {
            return true;
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.get(f, w[i]) != UNDEF {
                f = self.get(f, w[i]);
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return true;
            }
            while j >= i as isize && self.get(b, self.inv_col[w[j as usize]]) != UNDEF {
                b = self.get(b, self.inv_col[w[j as usize]]);
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return true;
            }
            if j == i as isize {
                // Deduction: both loops stopped at the same undefined entry.
                let x = w[i];
                self.set(f, x, b);
                self.set(b, self.inv_col[x], f);
                return true;
            }
            if !fill {
                return true;
            }
            if !self.define(f, w[i]) {
                return false;
            }
        }
    }

    /// Lookahead: scan every live coset under every relator without defining.
    fn lookahead(&mut self, relators: &[Vec<usize>]) {
        for c in 0..self.allocated() {
            for r in relators {
                if !self.is_live(c) {
                    break;
                }
                self.scan(c, r, false);
            }
        }
    }

    /// Renumbers live cosets consecutively, preserving order. Returns the
    /// old-to-new map.
    fn compact(&mut self) -> Vec<usize> {
        let n = self.allocated();
        let mut map = vec![UNDEF; n];
        let mut next = 0;
        for (c, slot) in map.iter_mut().enumerate() {
            if self.parent[c] == c {
                *slot = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next * self.ncols);
        for c in 0..n {
            if map[c] == UNDEF {
                continue;
            }
            for x in 0..self.ncols {
                let d = self.get(c, x);
                table.push(if d == UNDEF { UNDEF } else { map[self.rep(d)] });
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        self.live_count = next;
        map
    }
}

/// HLT coset enumeration of the subgroup generated by `subgens`.
///
/// Fails with a resource-limit error if the enumeration needs more than
/// `max_cosets` simultaneously allocated cosets.
pub fn todd_coxeter(p: &Presentation, subgens: &[Word], max_cosets: usize) -> Result<CosetTable> {
    let mut e = Enumerator::new(p, max_cosets.max(1));
    let to_cols = |e: &Enumerator, w: &[i32]| w.iter().map(|&x| e.col(x)).collect::<Vec<usize>>();
    let relators: Vec<Vec<usize>> = p.relators.iter().map(|r| to_cols(&e, r)).collect();
    let subs: Vec<Vec<usize>> = subgens.iter().map(|w| to_cols(&e, w)).collect();
    let limit = || Error::ResourceLimit { what: "cosets".into(), limit: max_cosets };
    for s in &subs {
        if !e.scan(0, s, true) {
            return Err(limit());
        }
    }
    let mut c = 0;
    while c < e.allocated() {
        if e.is_live(c) {
            let mut ok = true;
            for r in &relators {
                if !e.is_live(c) {
                    break;
                }
                if !e.scan(c, r, true) {
                    ok = false;
                    break;
                }
            }
            if ok && e.is_live(c) {
                for x in 0..e.ncols {
                    if e.get(c, x) == UNDEF && !e.define(c, x) {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                // Out of space: look ahead, compact, and retry this coset.
                e.lookahead(&relators);
                let before = e.allocated();
                let map = e.compact();
                if e.allocated() == before {
                    return Err(limit());
                }
                c = (0..c.min(map.len())).filter(|&k| map[k] != UNDEF).count();
                continue;
            }
        }
        c += 1;
    }
    e.compact();
    let n = e.allocated();
    let action: Vec<Vec<usize>> =
        (0..p.generators).map(|g| (0..n).map(|k| e.get(k, e.col_of[g].0)).collect()).collect();
    if action.iter().flatten().any(|&d| d == UNDEF) {
        return Err(Error::InvalidDiagram("coset enumeration left undefined entries".into()));
    }
    let table = CosetTable { index: n, action }.rebased(0);
    table.validate(p, subgens)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterDiagram;
    use crate::subgroups::coxeter_presentation;

    fn order(labels: &[u32]) -> usize {
        let p = coxeter_presentation(&CoxeterDiagram::path(labels).unwrap());
        todd_coxeter(&p, &[], 10_000).unwrap().index
    }

    #[test]
    fn finite_coxeter_orders() {
        assert_eq!(order(&[3]), 6);
        assert_eq!(order(&[4]), 8);
        assert_eq!(order(&[3, 3]), 24);
        assert_eq!(order(&[4, 3, 3]), 384);
        assert_eq!(order(&[3, 3, 3]), 120);
        assert_eq!(order(&[3, 4, 3]), 1152);
        assert_eq!(order(&[5, 3]), 120);
    }

    #[test]
    fn parity_subgroup_of_pentagon_group() {
        let p = coxeter_presentation(&CoxeterDiagram::lanner_pentagon());
        let subgens: Vec<Word> = (1..=5).flat_map(|i| (i + 1..=5).map(move |j| vec![i, j])).collect();
        let t = todd_coxeter(&p, &subgens, DEFAULT_MAX_COSETS).unwrap();
        assert_eq!(t.index, 2);
        let whole = todd_coxeter(&p, &[vec![1], vec![2], vec![3], vec![4], vec![5]], 100).unwrap();
        assert_eq!(whole.index, 1);
    }

    #[test]
    fn non_involutory_presentation() {
        // <a, b | a^3, b^2, (ab)^2> = S3; subgroup <a> has index 2.
        let p = Presentation::new(2, vec![vec![1, 1, 1], vec![2, 2], vec![1, 2, 1, 2]]).unwrap();
        assert_eq!(todd_coxeter(&p, &[], 100).unwrap().index, 6);
        assert_eq!(todd_coxeter(&p, &[vec![1]], 100).unwrap().index, 2);
        // Z/5 via a^5 with subgroup <a^2>: whole group.
        let z5 = Presentation::new(1, vec![vec![1; 5]]).unwrap();
        assert_eq!(todd_coxeter(&z5, &[vec![1, 1]], 100).unwrap().index, 1);
    }

    #[test]
    fn resource_limit_is_reported() {
        let p = Presentation::free(2);
        assert!(matches!(todd_coxeter(&p, &[], 50), Err(Error::ResourceLimit { .. })));
        let big = coxeter_presentation(&CoxeterDiagram::path(&[4, 3, 3]).unwrap());
        assert!(matches!(todd_coxeter(&big, &[], 100), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn rebasing_gives_conjugates() {
        let p = coxeter_presentation(&CoxeterDiagram::path(&[3]).unwrap());
        let t = todd_coxeter(&p, &[vec![1]], 100).unwrap();
        assert_eq!(t.index, 3);
        for b in 0..3 {
            t.rebased(b).validate(&p, &[]).unwrap();
        }
        assert_eq!(t.conjugacy_canonical(), t.rebased(1).conjugacy_canonical());
    }
}
