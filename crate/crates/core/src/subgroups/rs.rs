//! Reidemeister–Schreier presentations of finite-index subgroups.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::coset::CosetTable;
use super::presentation::{cyclic_reduce, free_reduce, inverse_word, letter_generator, Presentation, Word};
use crate::error::{Error, Result};

/// Schreier transversal: breadth-first spanning tree of the coset graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Transversal {
    /// Representative word of each coset (coset 0 has the empty word).
    pub reps: Vec<Word>,
    /// `parent[c] = (d, letter)` with `rep(c) = rep(d)·letter`; `None` at the root.
    pub parent: Vec<Option<(usize, i32)>>,
}

impl Transversal {
    pub fn new(p: &Presentation, t: &CosetTable) -> Self {
        let inv = p.involutions();
        let inverses: Vec<Vec<usize>> = (0..t.generators()).map(|g| t.inverse_action(g)).collect();
        let mut reps: Vec<Option<Word>> = vec![None; t.index];
        let mut parent = vec![None; t.index];
        reps[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for g in 0..t.generators() {
                let l = g as i32 + 1;
                let moves = if inv[g] { vec![(t.action[g][c], l)] } else { vec![(t.action[g][c], l), (inverses[g][c], -l)] };
                for (d, letter) in moves {
                    if reps[d].is_none() {
                        let mut w = reps[c].clone().expect("visited");
                        w.push(letter);
                        reps[d] = Some(w);
                        parent[d] = Some((c, letter));
                        queue.push_back(d);
                    }
                }
            }
        }
        Transversal { reps: reps.into_iter().map(|r| r.expect("coset graph is connected")).collect(), parent }
    }

    /// Whether the edge `c --g--> d` belongs to the spanning tree.
    fn is_tree_edge(&self, c: usize, g: usize, d: usize, involution: bool) -> bool {
        let l = g as i32 + 1;
        let back = if involution { l } else { -l };
        self.parent[d] == Some((c, l)) || self.parent[c] == Some((d, back))
    }
}

/// Presentation of a subgroup on Schreier generators, with the data needed
/// to rewrite subgroup elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct SubgroupPresentation {
    pub presentation: Presentation,
    /// Each Schreier generator as a word in the parent generators
    /// (`rep(c)·g·rep(c·g)⁻¹`, reduced).
    pub schreier_words: Vec<Word>,
    /// Each Schreier generator's defining edge `(coset, generator)`.
    pub edges: Vec<(usize, usize)>,
    pub transversal: Transversal,
    /// Coset table of the subgroup in the parent group.
    pub table: CosetTable,
    /// Parent generators that are involutions.
    pub involutions: Vec<bool>,
}

/// Rewriting data: the Schreier letter read at each edge.
struct Rewriter {
    /// `letter[g][c]`: signed Schreier letter for traversing `c --g--> c·g`, 0 for tree edges.
    letter: Vec<Vec<i32>>,
}

impl Rewriter {
    fn rewrite(&self, t: &CosetTable, inverses: &[Vec<usize>], start: usize, w: &[i32]) -> (Word, usize) {
        let mut out = Vec::new();
        let mut c = start;
        for &x in w {
            let g = letter_generator(x);
            if x > 0 {
                let y = self.letter[g][c];
                if y != 0 {
                    out.push(y);
                }
                c = t.action[g][c];
            } else {
                let d = inverses[g][c];
                let y = self.letter[g][d];
                if y != 0 {
                    out.push(-y);
                }
                c = d;
            }
        }
        (free_reduce(&out), c)
    }
}

/// Reidemeister–Schreier rewriting along a breadth-first Schreier transversal.
///
/// For an involutory generator `g`, the edges `c → d` and `d → c` give
/// mutually inverse Schreier generators; only the edge from the smaller coset
/// is kept. Relators are all relator conjugates rewritten at every coset,
/// cyclically reduced and deduplicated; no further simplification is done.
pub fn reidemeister_schreier(p: &Presentation, t: &CosetTable) -> Result<SubgroupPresentation> {
    t.validate(p, &[])?;
    let inv = p.involutions();
    let tr = Transversal::new(p, t);
    let mut letter = vec![vec![0i32; t.index]; t.generators()];
    let mut schreier_words = Vec::new();
    let mut edges = Vec::new();
    for c in 0..t.index {
        for g in 0..t.generators() {
            let d = t.action[g][c];
            if tr.is_tree_edge(c, g, d, inv[g]) || (inv[g] && d < c) {
                continue;
            }
            let mut w = tr.reps[c].clone();
            w.push(g as i32 + 1);
            w.extend(inverse_word(&tr.reps[d]));
            schreier_words.push(p.normalize_word(&w));
            edges.push((c, g));
            letter[g][c] = schreier_words.len() as i32;
        }
    }
    // Paired involution edges reuse the generator of the smaller coset.
    for c in 0..t.index {
        for g in 0..t.generators() {
            let d = t.action[g][c];
            if inv[g] && d < c {
                letter[g][c] = -letter[g][d];
            }
        }
    }
    let rw = Rewriter { letter };
    let inverses: Vec<Vec<usize>> = (0..t.generators()).map(|g| t.inverse_action(g)).collect();
    let mut seen = BTreeSet::new();
    let mut relators = Vec::new();
    for c in 0..t.index {
        for r in &p.relators {
            let (w, end) = rw.rewrite(t, &inverses, c, r);
            if end != c {
                return Err(Error::InvalidDiagram("relator does not close in the coset table".into()));
            }
            let w = cyclic_reduce(&w);
            if !w.is_empty() && seen.insert(w.clone()) {
                relators.push(w);
            }
        }
    }
    let presentation = Presentation::new(schreier_words.len(), relators)?;
    Ok(SubgroupPresentation { presentation, schreier_words, edges, transversal: tr, table: t.clone(), involutions: inv })
}

impl SubgroupPresentation {
    /// Rewrites a word in the parent generators that lies in the subgroup as
    /// a word in the Schreier generators; error if it does not fix coset 0.
    pub fn rewrite(&self, w: &[i32]) -> Result<Word> {
        let letter = self.letter_table();
        let inverses: Vec<Vec<usize>> = (0..self.table.generators()).map(|g| self.table.inverse_action(g)).collect();
        let (out, end) = Rewriter { letter }.rewrite(&self.table, &inverses, 0, w);
        if end != 0 {
            return Err(Error::InvalidDiagram(format!("word {w:?} is not in the subgroup (ends at coset {end})")));
        }
        Ok(out)
    }

    fn letter_table(&self) -> Vec<Vec<i32>> {
        let t = &self.table;
        let mut letter = vec![vec![0i32; t.index]; t.generators()];
        for (k, &(c, g)) in self.edges.iter().enumerate() {
            letter[g][c] = k as i32 + 1;
        }
        for c in 0..t.index {
            for g in 0..t.generators() {
                let d = t.action[g][c];
                if self.involutions[g] && d < c {
                    letter[g][c] = -letter[g][d];
                }
            }
        }
        letter
    }

    /// Free reduction in the parent group, with involutions made positive.
    pub fn presentation_normalize(&self, w: &[i32]) -> Word {
        let mut out: Word = Vec::with_capacity(w.len());
        for &x in w {
            let g = letter_generator(x);
            let x = if x < 0 && self.involutions[g] { -x } else { x };
            if out.last().is_some_and(|&y| y == -x || (y == x && self.involutions[g])) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        out
    }

    /// Number of Schreier generators.
    pub fn rank(&self) -> usize {
        self.schreier_words.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterDiagram;
    use crate::subgroups::{abelianization, coxeter_presentation, todd_coxeter};

    #[test]
    fn index_one_returns_original_presentation() {
        let p = coxeter_presentation(&CoxeterDiagram::path(&[3]).unwrap());
        let t = todd_coxeter(&p, &[vec![1], vec![2]], 100).unwrap();
        let s = reidemeister_schreier(&p, &t).unwrap();
        assert_eq!(s.presentation, p);
        assert_eq!(s.schreier_words, vec![vec![1], vec![2]]);
    }

    #[test]
    fn rotation_subgroup_of_s3_is_cyclic_of_order_three() {
        let p = coxeter_presentation(&CoxeterDiagram::path(&[3]).unwrap());
        let t = todd_coxeter(&p, &[vec![1, 2]], 100).unwrap();
        assert_eq!(t.index, 2);
        let s = reidemeister_schreier(&p, &t).unwrap();
        let ab = abelianization(&s.presentation).unwrap();
        assert_eq!(ab.invariant_factors, vec![3]);
        assert_eq!(ab.betti, 0);
        // Its order is 3: the trivial subgroup of the RS presentation has 3 cosets.
        assert_eq!(todd_coxeter(&s.presentation, &[], 100).unwrap().index, 3);
    }

    #[test]
    fn schreier_words_lie_in_subgroup_and_rewrite_back() {
        let p = coxeter_presentation(&CoxeterDiagram::lanner_pentagon());
        let subgens: Vec<Word> = (1..=5).flat_map(|i| (i + 1..=5).map(move |j| vec![i, j])).collect();
        let t = todd_coxeter(&p, &subgens, 1000).unwrap();
        let s = reidemeister_schreier(&p, &t).unwrap();
        for (k, w) in s.schreier_words.iter().enumerate() {
            assert_eq!(t.apply(0, w), 0);
            assert_eq!(w.len() % 2, 0);
            assert_eq!(s.rewrite(w).unwrap(), vec![k as i32 + 1]);
        }
        assert!(s.rewrite(&[1]).is_err());
        let ab = abelianization(&s.presentation).unwrap();
        assert!(ab.invariant_factors.windows(2).all(|w| w[1] % w[0] == 0));
    }

    #[test]
    fn nielsen_schreier_rank() {
        // Subgroups of index k in a free group of rank r are free of rank k(r-1)+1.
        for r in 2..=3 {
            let p = Presentation::free(r);
            for t in crate::subgroups::low_index_subgroups(&p, 3).unwrap() {
                let s = reidemeister_schreier(&p, &t).unwrap();
                assert_eq!(s.rank(), t.index * (r - 1) + 1);
                let ab = abelianization(&s.presentation).unwrap();
                assert_eq!(ab.betti, t.index * (r - 1) + 1);
                assert!(ab.invariant_factors.is_empty());
            }
        }
    }
}
