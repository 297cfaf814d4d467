//! Exact two-phase simplex over an ordered field, with Bland's rule.
//!
//! All variables are constrained to be nonnegative. Free variables are
//! modelled by the caller as differences of two nonnegative ones.

use crate::linalg::OrderedField;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint<F> {
    pub coeffs: Vec<F>,
    pub relation: Relation,
    pub rhs: F,
}

impl<F> Constraint<F> {
    pub fn new(coeffs: Vec<F>, relation: Relation, rhs: F) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<F> {
    Optimal { x: Vec<F>, value: F },
    Infeasible,
    Unbounded,
}

struct Tableau<F> {
    // rows[i] has `width` coefficients followed by the right-hand side.
    rows: Vec<Vec<F>>,
    obj: Vec<F>,
    basis: Vec<usize>,
    width: usize,
}

impl<F: OrderedField> Tableau<F> {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].inverse().expect("pivot on zero");
        for x in self.rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<F>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    /// Runs simplex iterations on the current objective row, allowing only
    /// columns below `allowed` to enter. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].signum_i8() > 0) else {
                return true;
            };
            let rhs = self.width;
            let mut best: Option<(usize, F)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].signum_i8() <= 0 {
                    continue;
                }
                let ratio = row[rhs].clone() * row[c].inverse().expect("positive entry");
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        let d = (ratio.clone() - br.clone()).signum_i8();
                        d < 0 || (d == 0 && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    /// Installs `cost` (indexed by column) as the objective and prices out the basis.
    fn set_objective(&mut self, cost: &[F]) {
        let mut obj: Vec<F> = cost.to_vec();
        obj.push(F::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (o, a) in obj.iter_mut().zip(&self.rows[i]) {
                *o = o.clone() - cb.clone() * a.clone();
            }
        }
        self.obj = obj;
    }

    fn objective_value(&self) -> F {
        -self.obj[self.width].clone()
    }
}

/// Maximizes `objective · x` subject to the constraints and `x >= 0`.
pub fn maximize<F: OrderedField>(objective: &[F], constraints: &[Constraint<F>]) -> LpOutcome<F> {
    let n = objective.len();
    let m = constraints.len();
    let slack_count = constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    let mut art_rows = Vec::new();

    // Normalize to nonnegative right-hand sides.
    let normalized: Vec<(Vec<F>, Relation, F)> = constraints
        .iter()
        .map(|c| {
            assert_eq!(c.coeffs.len(), n, "constraint width mismatch");
            if c.rhs.signum_i8() < 0 {
                let rel = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|x| -x.clone()).collect(), rel, -c.rhs.clone())
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            }
        })
        .collect();
    for (i, (_, rel, _)) in normalized.iter().enumerate() {
        if *rel != Relation::Le {
            art_rows.push(i);
        }
    }
    let art_start = n + slack_count;
    let width = art_start + art_rows.len();

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack = n;
    let mut art = art_start;
    for (coeffs, rel, rhs) in normalized {
        let mut row = coeffs;
        row.resize(width + 1, F::zero());
        row[width] = rhs;
        match rel {
            Relation::Le => {
                row[slack] = F::one();
                basis.push(slack);
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -F::one();
                slack += 1;
                row[art] = F::one();
                basis.push(art);
                art += 1;
            }
            Relation::Eq => {
                row[art] = F::one();
                basis.push(art);
                art += 1;
            }
        }
        rows.push(row);
    }

    let mut t = Tableau { rows, obj: Vec::new(), basis, width };

    if !art_rows.is_empty() {
        let mut cost = vec![F::zero(); width];
        for c in cost.iter_mut().skip(art_start) {
            *c = -F::one();
        }
        t.set_objective(&cost);
        t.optimize(width);
        if t.objective_value().signum_i8() < 0 {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= art_start {
                match (0..art_start).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(c) => t.pivot(r, c),
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut cost = vec![F::zero(); width];
    cost[..n].clone_from_slice(objective);
    t.set_objective(&cost);
    if !t.optimize(art_start) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![F::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rows[i][width].clone();
        }
    }
    let value = t.objective_value();
    LpOutcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{rational, Rational};

    fn q(n: i64) -> Rational {
        rational(n, 1)
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), 36
        let cons = vec![
            Constraint::new(vec![q(1), q(0)], Relation::Le, q(4)),
            Constraint::new(vec![q(0), q(2)], Relation::Le, q(12)),
            Constraint::new(vec![q(3), q(2)], Relation::Le, q(18)),
        ];
        match maximize(&[q(3), q(5)], &cons) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![q(2), q(6)]);
                assert_eq!(value, q(36));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_and_ge_constraints() {
        // min x + y  s.t. x + 2y >= 4, x - y = 1  ->  x = 2, y = 1
        let cons = vec![
            Constraint::new(vec![q(1), q(2)], Relation::Ge, q(4)),
            Constraint::new(vec![q(1), q(-1)], Relation::Eq, q(1)),
        ];
        match maximize(&[q(-1), q(-1)], &cons) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![q(2), q(1)]);
                assert_eq!(value, q(-3));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let cons = vec![
            Constraint::new(vec![q(1)], Relation::Le, q(1)),
            Constraint::new(vec![q(1)], Relation::Ge, q(2)),
        ];
        assert_eq!(maximize(&[q(1)], &cons), LpOutcome::Infeasible);
        let cons = vec![Constraint::new(vec![q(1), q(-1)], Relation::Le, q(1))];
        assert_eq!(maximize(&[q(1), q(0)], &cons), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_is_normalized() {
        // -x <= -3 means x >= 3; minimize x.
        let cons = vec![Constraint::new(vec![q(-1)], Relation::Le, q(-3))];
        match maximize(&[q(-1)], &cons) {
            LpOutcome::Optimal { x, .. } => assert_eq!(x, vec![q(3)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_equalities() {
        let cons = vec![
            Constraint::new(vec![q(1), q(1)], Relation::Eq, q(2)),
            Constraint::new(vec![q(2), q(2)], Relation::Eq, q(4)),
        ];
        match maximize(&[q(1), q(0)], &cons) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![q(2), q(0)]);
                assert_eq!(value, q(2));
            }
            other => panic!("{other:?}"),
        }
    }
}
