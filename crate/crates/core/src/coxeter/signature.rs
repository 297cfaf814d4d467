use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, OrderedField};

/// Inertia of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
pub struct SignatureReport {
    pub positives: usize,
    pub zeros: usize,
    pub negatives: usize,
}

impl SignatureReport {
    pub fn new(positives: usize, zeros: usize, negatives: usize) -> Self {
        SignatureReport { positives, zeros, negatives }
    }

    pub fn dim(&self) -> usize {
        self.positives + self.zeros + self.negatives
    }

    pub fn is_positive_definite(&self) -> bool {
        self.zeros == 0 && self.negatives == 0
    }

    /// Signature `(n-1, 0, 1)` of a compact hyperbolic simplex.
    pub fn is_lorentzian(&self) -> bool {
        self.zeros == 0 && self.negatives == 1
    }
}

/// Exact inertia by symmetric congruence reduction.
///
/// A nonzero diagonal pivot is eliminated from its row and column together.
/// When the whole remaining diagonal vanishes but some off-diagonal `b` does
/// not, the 2x2 block `[[0, b], [b, 0]]` is split off; it contributes one
/// positive and one negative direction.
pub fn signature<F: OrderedField>(m: &Matrix<F>) -> Result<SignatureReport> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut a: Vec<Vec<F>> = m.to_rows();
    let mut report = SignatureReport::new(0, 0, 0);
    while !a.is_empty() {
        let k = a.len();
        if let Some(p) = (0..k).find(|&i| !a[i][i].is_zero()) {
            let pivot = a[p][p].clone();
            match pivot.signum_i8() {
                1 => report.positives += 1,
                _ => report.negatives += 1,
            }
            let inv = pivot.inverse().expect("nonzero pivot");
            let rest: Vec<usize> = (0..k).filter(|&i| i != p).collect();
            a = rest
                .iter()
                .map(|&i| {
                    let f = a[i][p].clone() * inv.clone();
                    rest.iter()
                        .map(|&j| {
                            if a[p][j].is_zero() || f.is_zero() {
                                a[i][j].clone()
                            } else {
                                a[i][j].clone() - f.clone() * a[p][j].clone()
                            }
                        })
                        .collect()
                })
                .collect();
            continue;
        }
        let off = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
        let Some((p, q)) = off else {
            report.zeros += k;
            break;
        };
        report.positives += 1;
        report.negatives += 1;
        // Schur complement of [[0, b], [b, 0]], whose inverse is [[0, 1/b], [1/b, 0]].
        let binv = a[p][q].inverse().expect("nonzero off-diagonal");
        let rest: Vec<usize> = (0..k).filter(|&i| i != p && i != q).collect();
        a = rest
            .iter()
            .map(|&i| {
                rest.iter()
                    .map(|&j| {
                        let corr = (a[i][p].clone() * a[q][j].clone() + a[i][q].clone() * a[p][j].clone())
                            * binv.clone();
                        a[i][j].clone() - corr
                    })
                    .collect()
            })
            .collect();
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;
    use crate::numfield::{rational, Rational};
    use proptest::prelude::*;

    fn sig(rows: &[&[i64]]) -> SignatureReport {
        signature(&IntMatrix::from_i64(rows).to_rational()).unwrap()
    }

    #[test]
    fn basic_signatures() {
        assert_eq!(signature(&Matrix::<Rational>::identity(5)).unwrap(), SignatureReport::new(5, 0, 0));
        assert_eq!(sig(&[&[2, -2], &[-2, 2]]), SignatureReport::new(1, 1, 0));
        assert_eq!(sig(&[&[0, 1], &[1, 0]]), SignatureReport::new(1, 0, 1));
        assert_eq!(sig(&[&[0, 0], &[0, 0]]), SignatureReport::new(0, 2, 0));
        // Zero diagonal with a hyperbolic pair and a coupled third vector.
        assert_eq!(sig(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]), SignatureReport::new(1, 0, 2));
        assert!(matches!(
            signature(&IntMatrix::from_i64(&[&[1, 2], &[3, 4]]).to_rational()),
            Err(Error::NotSymmetric)
        ));
    }

    fn unimodular(seed: &[i64]) -> IntMatrix {
        // Product of elementary matrices; determinant one.
        let n = 4;
        let mut s = IntMatrix::identity(n);
        for (k, &c) in seed.iter().enumerate() {
            let (i, j) = (k % n, (k * 7 + 1) % n);
            if i == j {
                continue;
            }
            let mut e = IntMatrix::identity(n);
            e[(i, j)] = c.into();
            s = &s * &e;
        }
        s
    }

    proptest! {
        #[test]
        fn congruence_invariance(
            entries in proptest::collection::vec(-4i64..=4, 10),
            seed in proptest::collection::vec(-3i64..=3, 8),
        ) {
            let n = 4;
            let mut m = Matrix::<Rational>::zeros(n, n);
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    m[(i, j)] = rational(entries[k], 1);
                    m[(j, i)] = rational(entries[k], 1);
                    k += 1;
                }
            }
            let s = unimodular(&seed).to_rational();
            let congruent = &(&s.transpose() * &m) * &s;
            prop_assert_eq!(signature(&m).unwrap(), signature(&congruent).unwrap());
            prop_assert_eq!(signature(&m).unwrap().dim(), n);
        }
    }
}
