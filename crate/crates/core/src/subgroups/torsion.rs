//! Torsion-freeness and orientation of finite-index subgroups of Coxeter groups.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::coset::CosetTable;
use super::presentation::{coxeter_presentation, Presentation, Word};
use super::rs::Transversal;
use super::todd_coxeter;
use crate::coxeter::{is_elliptic, CoxeterDiagram};
use crate::error::{Error, Result};

/// Largest parabolic subgroup order enumerated by the torsion test.
pub const PARABOLIC_ORDER_LIMIT: usize = 100_000;

/// A nontrivial finite-order element fixing a coset: `rep(c)·w·rep(c)⁻¹`
/// lies in the subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct TorsionWitness {
    /// Vertices of the maximal parabolic containing the element (0-based).
    pub parabolic: Vec<usize>,
    /// The element as 0-based generator indices.
    pub word: Vec<usize>,
    pub coset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct TorsionReport {
    pub torsion_free: bool,
    pub witness: Option<TorsionWitness>,
    /// Orders of the maximal parabolic subgroups, in vertex-deletion order.
    pub parabolic_orders: Vec<usize>,
}

/// Elements of the finite parabolic subgroup on `vertices`, as words in the
/// full group's 0-based generators, the identity first.
pub fn parabolic_elements(d: &CoxeterDiagram, vertices: &[usize]) -> Result<Vec<Vec<usize>>> {
    let sub = d.induced(vertices);
    if !is_elliptic(&sub)? {
        return Err(Error::Unsupported(format!("parabolic subgroup on vertices {vertices:?} is infinite")));
    }
    let p = coxeter_presentation(&sub);
    let t = todd_coxeter(&p, &[], PARABOLIC_ORDER_LIMIT)?;
    let tr = Transversal::new(&p, &t);
    Ok(tr.reps.iter().map(|w| w.iter().map(|&x| vertices[(x - 1) as usize]).collect()).collect())
}

/// Full torsion analysis of the subgroup with coset table `t` in the Coxeter
/// group of `d`: the subgroup is torsion-free iff no nontrivial element of a
/// maximal proper standard parabolic fixes a coset.
pub fn torsion_report(t: &CosetTable, d: &CoxeterDiagram) -> Result<TorsionReport> {
    let n = d.rank();
    if t.generators() != n {
        return Err(Error::DimensionMismatch { expected: n, got: t.generators() });
    }
    t.validate(&coxeter_presentation(d), &[])?;
    let mut parabolic_orders = Vec::new();
    let mut witness = None;
    for drop in 0..n {
        let vertices: Vec<usize> = (0..n).filter(|&v| v != drop).collect();
        let sub = d.induced(&vertices);
        if !is_elliptic(&sub)? {
            return Err(Error::Unsupported(format!("parabolic subgroup omitting vertex {drop} is infinite")));
        }
        let p = coxeter_presentation(&sub);
        let regular = todd_coxeter(&p, &[], PARABOLIC_ORDER_LIMIT)?;
        parabolic_orders.push(regular.index);
        if witness.is_some() {
            continue;
        }
        // Breadth-first over the parabolic's elements, carrying each
        // element's permutation of the cosets of `t`.
        let mut perms: Vec<Option<Vec<usize>>> = vec![None; regular.index];
        let mut words: Vec<Vec<usize>> = vec![Vec::new(); regular.index];
        perms[0] = Some((0..t.index).collect());
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (k, &v) in vertices.iter().enumerate() {
                let f = regular.action[k][e];
                if perms[f].is_some() {
                    continue;
                }
                let perm: Vec<usize> = perms[e].as_ref().expect("visited").iter().map(|&c| t.action[v][c]).collect();
                let mut w = words[e].clone();
                w.push(v);
                if let Some(c) = (0..t.index).find(|&c| perm[c] == c).filter(|_| witness.is_none()) {
                    witness = Some(TorsionWitness { parabolic: vertices.clone(), word: w.clone(), coset: c });
                }
                perms[f] = Some(perm);
                words[f] = w;
                queue.push_back(f);
            }
            if witness.is_some() {
                break;
            }
        }
    }
    Ok(TorsionReport { torsion_free: witness.is_none(), witness, parabolic_orders })
}

pub fn is_torsion_free(t: &CosetTable, d: &CoxeterDiagram, p: &Presentation) -> Result<bool> {
    if *p != coxeter_presentation(d) {
        return Err(Error::Unsupported("torsion test needs the Coxeter presentation of the diagram".into()));
    }
    Ok(torsion_report(t, d)?.torsion_free)
}

/// `true` iff every Schreier generator has even length, i.e. the subgroup
/// lies in the kernel of the parity character. Requires every generator to
/// be an involution (so that length parity is well defined).
pub fn orientation_preserving(t: &CosetTable, p: &Presentation) -> Result<bool> {
    if !p.is_involutory() {
        return Err(Error::Unsupported("orientation test needs involutory generators".into()));
    }
    t.validate(p, &[])?;
    let tr = Transversal::new(p, t);
    // rep(c)·g·rep(c·g)⁻¹ has the parity of |rep(c)| + 1 + |rep(c·g)|.
    Ok((0..t.index).all(|c| {
        (0..t.generators()).all(|g| (tr.reps[c].len() + 1 + tr.reps[t.action[g][c]].len()).is_multiple_of(2))
    }))
}

/// Words of the subgroup generators of the parity (even-length) subgroup:
/// `sᵢsⱼ` for `i < j`.
pub fn parity_subgroup_generators(n: usize) -> Vec<Word> {
    (1..=n as i32).flat_map(|i| (i + 1..=n as i32).map(move |j| vec![i, j])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroups::DEFAULT_MAX_COSETS;

    #[test]
    fn pentagon_examples() {
        let d = CoxeterDiagram::lanner_pentagon();
        let p = coxeter_presentation(&d);
        let whole = todd_coxeter(&p, &[vec![1], vec![2], vec![3], vec![4], vec![5]], 100).unwrap();
        assert_eq!(whole.index, 1);
        let r = torsion_report(&whole, &d).unwrap();
        assert!(!r.torsion_free);
        assert_eq!(r.witness.unwrap().word, vec![1]);
        assert!(!orientation_preserving(&whole, &p).unwrap());

        let parity = todd_coxeter(&p, &parity_subgroup_generators(5), DEFAULT_MAX_COSETS).unwrap();
        assert_eq!(parity.index, 2);
        let r = torsion_report(&parity, &d).unwrap();
        assert!(!r.torsion_free);
        let w = r.witness.unwrap();
        assert_eq!(w.word.len() % 2, 0);
        assert!(!is_torsion_free(&parity, &d, &p).unwrap());
        assert!(orientation_preserving(&parity, &p).unwrap());
        // Maximal parabolics: A4, A4, B4, F4, B4.
        assert_eq!(r.parabolic_orders, vec![120, 120, 384, 1152, 384]);
    }

    #[test]
    fn regular_action_is_torsion_free() {
        let d = CoxeterDiagram::path(&[4, 3, 3]).unwrap();
        let p = coxeter_presentation(&d);
        let t = todd_coxeter(&p, &[], 1000).unwrap();
        assert_eq!(t.index, 384);
        assert!(is_torsion_free(&t, &d, &p).unwrap());
        // The trivial subgroup lies in every kernel, in particular the parity one.
        assert!(orientation_preserving(&t, &p).unwrap());
    }

    #[test]
    fn parabolic_elements_count() {
        let d = CoxeterDiagram::lanner_pentagon();
        let els = parabolic_elements(&d, &[0, 1]).unwrap();
        assert_eq!(els.len(), 2 * d.label(0, 1) as usize);
        assert!(els[0].is_empty());
    }

    #[test]
    fn infinite_parabolic_is_unsupported() {
        // Affine A~2 triangle plus a vertex: dropping the extra vertex leaves an infinite group.
        let d = CoxeterDiagram::from_edges(4, &[(0, 1, 3), (1, 2, 3), (0, 2, 3)]).unwrap();
        let p = coxeter_presentation(&d);
        let t = todd_coxeter(&p, &[vec![1], vec![2], vec![3], vec![4]], 10).unwrap();
        assert!(matches!(torsion_report(&t, &d), Err(Error::Unsupported(_))));
    }
}
