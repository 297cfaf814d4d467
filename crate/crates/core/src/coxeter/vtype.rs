use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::CartanMatrix;
use crate::error::{Error, Result};
use crate::lp::{maximize, Constraint, LpOutcome, Relation};
use crate::numfield::AlgNum;

/// Vinberg's trichotomy for indecomposable Cartan matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "lowercase")]
pub enum CartanType {
    Positive,
    Zero,
    Negative,
}

/// Exact witness for a type decision: `u > 0` with `Au` of the claimed sign.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeWitness {
    pub cartan_type: CartanType,
    /// Normalized so that its entries sum to one.
    pub u: Vec<AlgNum>,
    pub au: Vec<AlgNum>,
    /// Maximized margin `t`: `u_i >= t`, and `|(Au)_i| >= t` unless zero type.
    pub margin: AlgNum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct CartanTypeReport {
    pub cartan_type: CartanType,
    pub witness_u: Vec<String>,
    pub witness_au: Vec<String>,
    pub margin: String,
    pub verified: bool,
}

impl TypeWitness {
    /// Re-checks the witness against `a` from scratch.
    pub fn verify(&self, a: &CartanMatrix) -> bool {
        if self.u.len() != a.rank() || self.u.iter().any(|x| x.sign() <= 0) {
            return false;
        }
        let au = a.entries().mul_vec(&self.u);
        au == self.au
            && au.iter().all(|x| match self.cartan_type {
                CartanType::Positive => x.sign() > 0,
                CartanType::Zero => x.is_zero(),
                CartanType::Negative => x.sign() < 0,
            })
    }

    pub fn report(&self, a: &CartanMatrix) -> CartanTypeReport {
        CartanTypeReport {
            cartan_type: self.cartan_type,
            witness_u: self.u.iter().map(ToString::to_string).collect(),
            witness_au: self.au.iter().map(ToString::to_string).collect(),
            margin: self.margin.to_string(),
            verified: self.verify(a),
        }
    }
}

/// Maximizes the margin `t` over `u >= 0`, `Σu = 1`, `u_i >= t` and the
/// sign condition on `Au` for the given type; returns the optimum when `t > 0`.
fn margin_lp(a: &CartanMatrix, ty: CartanType) -> Option<(Vec<AlgNum>, AlgNum)> {
    let n = a.rank();
    // Variables: u_0..u_{n-1}, t.
    let mut objective = vec![AlgNum::zero(); n + 1];
    objective[n] = AlgNum::one();
    let mut constraints = Vec::new();
    let mut sum = vec![AlgNum::one(); n + 1];
    sum[n] = AlgNum::zero();
    constraints.push(Constraint::new(sum, Relation::Eq, AlgNum::one()));
    for i in 0..n {
        let mut row = vec![AlgNum::zero(); n + 1];
        row[i] = AlgNum::one();
        row[n] = -AlgNum::one();
        constraints.push(Constraint::new(row, Relation::Ge, AlgNum::zero()));
    }
    for i in 0..n {
        let mut row: Vec<AlgNum> = a.entries().row(i).to_vec();
        match ty {
            CartanType::Positive => {
                row.push(-AlgNum::one());
                constraints.push(Constraint::new(row, Relation::Ge, AlgNum::zero()));
            }
            CartanType::Zero => {
                row.push(AlgNum::zero());
                constraints.push(Constraint::new(row, Relation::Eq, AlgNum::zero()));
            }
            CartanType::Negative => {
                row.push(AlgNum::one());
                constraints.push(Constraint::new(row, Relation::Le, AlgNum::zero()));
            }
        }
    }
    match maximize(&objective, &constraints) {
        LpOutcome::Optimal { x, value } if value.sign() > 0 => Some((x[..n].to_vec(), value)),
        _ => None,
    }
}

/// Decides the type by exact linear feasibility, returning a checkable witness.
pub fn cartan_type_witness(a: &CartanMatrix) -> Result<TypeWitness> {
    let comps = a.components();
    if comps.len() != 1 {
        return Err(Error::Decomposable(comps));
    }
    for ty in [CartanType::Positive, CartanType::Zero, CartanType::Negative] {
        if let Some((u, margin)) = margin_lp(a, ty) {
            let au = a.entries().mul_vec(&u);
            return Ok(TypeWitness { cartan_type: ty, u, au, margin });
        }
    }
    Err(Error::InvalidCartan("no type witness found; input violates the Cartan sign pattern".into()))
}

pub fn cartan_type(a: &CartanMatrix) -> Result<CartanType> {
    Ok(cartan_type_witness(a)?.cartan_type)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{cartan_from_diagram, signature, CoxeterDiagram, LABELS};
    use crate::linalg::IntMatrix;
    use std::collections::BTreeSet;

    fn int(rows: &[&[i64]]) -> CartanMatrix {
        CartanMatrix::from_integer(&IntMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn examples() {
        let ap = CartanMatrix::pentagon_integral();
        let w = cartan_type_witness(&ap).unwrap();
        assert_eq!(w.cartan_type, CartanType::Negative);
        assert!(w.verify(&ap));
        assert_eq!(cartan_type(&int(&[&[2, -1], &[-1, 2]])).unwrap(), CartanType::Positive);
        assert_eq!(cartan_type(&int(&[&[2, -2], &[-2, 2]])).unwrap(), CartanType::Zero);
        let a = cartan_from_diagram(&CoxeterDiagram::lanner_pentagon()).unwrap();
        assert_eq!(cartan_type(&a).unwrap(), CartanType::Negative);
    }

    #[test]
    fn decomposable_rejected() {
        let a = int(&[&[2, -1, 0], &[-1, 2, 0], &[0, 0, 2]]);
        match cartan_type(&a) {
            Err(Error::Decomposable(c)) => assert_eq!(c, vec![vec![0, 1], vec![2]]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tampered_witness_fails() {
        let ap = CartanMatrix::pentagon_integral();
        let mut w = cartan_type_witness(&ap).unwrap();
        w.cartan_type = CartanType::Positive;
        assert!(!w.verify(&ap));
    }

    /// Positive definiteness and positive type agree for every connected
    /// diagram of rank at most 4 (one representative per isomorphism class).
    #[test]
    fn positive_type_matches_signature_up_to_rank_four() {
        let mut checked = 0;
        for n in 1..=4usize {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let mut seen = BTreeSet::new();
            let choices = LABELS.len().pow(pairs.len() as u32);
            for code in 0..choices {
                let mut d = CoxeterDiagram::discrete(n).unwrap();
                let mut c = code;
                for &(i, j) in &pairs {
                    d.set_label(i, j, LABELS[c % LABELS.len()]).unwrap();
                    c /= LABELS.len();
                }
                if !d.is_connected() || !seen.insert(d.canonical().upper_labels()) {
                    continue;
                }
                let a = cartan_from_diagram(&d).unwrap();
                let w = cartan_type_witness(&a).unwrap();
                assert!(w.verify(&a));
                let pd = signature(a.entries()).unwrap().is_positive_definite();
                assert_eq!(pd, w.cartan_type == CartanType::Positive, "diagram {:?}", d.labels());
                checked += 1;
            }
        }
        assert!(checked > 100);
    }
}
