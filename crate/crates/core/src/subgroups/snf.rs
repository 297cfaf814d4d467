//! Smith normal form over the integers; abelianization and maps onto Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::presentation::{letter_generator, Presentation};
use crate::error::{Error, Result};

type Mat = Vec<Vec<BigInt>>;

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn matmul(a: &Mat, b: &Mat, inner: usize, cols: usize) -> Mat {
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect())
        .collect()
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal with a
/// divisibility chain of nonnegative entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    /// Diagonal entries `D[k][k]` for `k < min(rows, cols)`.
    pub diagonal: Vec<BigInt>,
    pub u: Mat,
    pub u_inv: Mat,
    pub v: Mat,
    pub v_inv: Mat,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn d_matrix(&self) -> Mat {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| if i == j { self.diagonal[i].clone() } else { BigInt::zero() }).collect())
            .collect()
    }

    /// `U⁻¹ · D · V⁻¹`, which must reproduce the input matrix.
    pub fn recompose(&self) -> Mat {
        let ud = matmul(&self.u_inv, &self.d_matrix(), self.rows, self.cols);
        matmul(&ud, &self.v_inv, self.cols, self.cols)
    }
}

struct Reducer {
    m: Mat,
    u: Mat,
    u_inv: Mat,
    v: Mat,
    v_inv: Mat,
}

impl Reducer {
    /// row_i += k · row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for mat in [&mut self.m, &mut self.u] {
            let src = mat[j].clone();
            for (a, b) in mat[i].iter_mut().zip(&src) {
                *a += k * b;
            }
        }
        for row in self.u_inv.iter_mut() {
            let t = &row[i] * k;
            row[j] -= t;
        }
    }

    /// col_i += k · col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for mat in [&mut self.m, &mut self.v] {
            for row in mat.iter_mut() {
                let t = &row[j] * k;
                row[i] += t;
            }
        }
        let src = self.v_inv[i].clone();
        for (a, b) in self.v_inv[j].iter_mut().zip(&src) {
            *a -= k * b;
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.m.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for mat in [&mut self.m, &mut self.v] {
            for row in mat.iter_mut() {
                row.swap(i, j);
            }
        }
        self.v_inv.swap(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.m[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -&*x;
        }
        for row in self.u_inv.iter_mut() {
            row[i] = -&row[i];
        }
    }

    /// Position of the nonzero entry of least absolute value in the
    /// lower-right block starting at `t`.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m.len() {
            for j in t..self.m[i].len() {
                let x = &self.m[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn smith_normal_form(m: &[Vec<BigInt>], cols: usize) -> Result<SmithForm> {
    let rows = m.len();
    if let Some(r) = m.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
    }
    let mut r = Reducer { m: m.to_vec(), u: identity(rows), u_inv: identity(rows), v: identity(cols), v_inv: identity(cols) };
    let k = rows.min(cols);
    for t in 0..k {
        let Some((pi, pj)) = r.min_pivot(t) else { break };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !r.m[i][t].is_zero() {
                    let q = r.m[i][t].div_floor(&r.m[t][t]);
                    r.add_row(i, t, &-q);
                    dirty |= !r.m[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !r.m[t][j].is_zero() {
                    let q = r.m[t][j].div_floor(&r.m[t][t]);
                    r.add_col(j, t, &-q);
                    dirty |= !r.m[t][j].is_zero();
                }
            }
            if !dirty {
                // Divisibility: fold a row with a non-multiple into the pivot row.
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !r.m[i][j].is_multiple_of(&r.m[t][t])));
                match bad {
                    None => break,
                    Some(i) => r.add_row(t, i, &BigInt::one()),
                }
            }
            // Re-pivot on the smallest entry in row t / column t.
            let mut best = (t, t);
            for i in t..rows {
                if !r.m[i][t].is_zero() && r.m[i][t].abs() < r.m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !r.m[t][j].is_zero() && r.m[t][j].abs() < r.m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            r.swap_rows(t, best.0);
            r.swap_cols(t, best.1);
        }
        if r.m[t][t].is_negative() {
            r.negate_row(t);
        }
    }
    let diagonal = (0..k).map(|i| r.m[i][i].clone()).collect();
    Ok(SmithForm { rows, cols, diagonal, u: r.u, u_inv: r.u_inv, v: r.v, v_inv: r.v_inv })
}

/// Exponent-sum matrix: one row per relator, one column per generator.
pub fn relator_matrix(p: &Presentation) -> Mat {
    p.relators
        .iter()
        .map(|r| {
            let mut row = vec![BigInt::zero(); p.generators];
            for &x in r {
                row[letter_generator(x)] += if x > 0 { 1 } else { -1 };
            }
            row
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct AbelianizationReport {
    /// Torsion invariant factors, each at least 2, forming a divisibility chain.
    pub invariant_factors: Vec<u64>,
    /// Rank of the free part.
    pub betti: usize,
}

impl std::fmt::Display for AbelianizationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        match self.betti {
            0 => {}
            1 => parts.push("Z".into()),
            b => parts.push(format!("Z^{b}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn report_from(snf: &SmithForm) -> Result<AbelianizationReport> {
    let invariant_factors = snf
        .diagonal
        .iter()
        .filter(|d| **d > BigInt::one())
        .map(|d| d.to_u64().ok_or_else(|| Error::Unsupported(format!("invariant factor {d} exceeds 64 bits"))))
        .collect::<Result<_>>()?;
    Ok(AbelianizationReport { invariant_factors, betti: snf.cols - snf.rank() })
}

/// Abelianization of a finitely presented group via the Smith normal form
/// of its relator exponent-sum matrix.
pub fn abelianization(p: &Presentation) -> Result<AbelianizationReport> {
    report_from(&smith_normal_form(&relator_matrix(p), p.generators)?)
}

/// Homomorphism onto Z, given by the image of each generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Epimorphism {
    pub images: Vec<i64>,
}

impl Epimorphism {
    /// Image of a signed word.
    pub fn apply(&self, w: &[i32]) -> i64 {
        w.iter().map(|&x| if x > 0 { self.images[letter_generator(x)] } else { -self.images[letter_generator(x)] }).sum()
    }

    /// Surjective iff the images have gcd 1.
    pub fn is_surjective(&self) -> bool {
        self.images.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1
    }
}

/// One map onto Z per free factor of the abelianization: column `j ≥ rank`
/// of the column transform `V` kills every relator, and since `V` is
/// unimodular the columns are primitive, hence the maps are onto.
pub fn maps_to_z(p: &Presentation) -> Result<Vec<Epimorphism>> {
    let snf = smith_normal_form(&relator_matrix(p), p.generators)?;
    let rank = snf.rank();
    let maps = (rank..p.generators)
        .map(|j| {
            let images = (0..p.generators)
                .map(|i| snf.v[i][j].to_i64().ok_or_else(|| Error::Unsupported("map coefficient exceeds 64 bits".into())))
                .collect::<Result<Vec<_>>>()?;
            Ok(Epimorphism { images })
        })
        .collect::<Result<Vec<_>>>()?;
    for (k, phi) in maps.iter().enumerate() {
        if !phi.is_surjective() || p.relators.iter().any(|r| phi.apply(r) != 0) {
            return Err(Error::InvalidDiagram(format!("map {k} to Z is not a well-defined epimorphism")));
        }
    }
    Ok(maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterDiagram;
    use crate::subgroups::coxeter_presentation;
    use proptest::prelude::*;

    fn big(rows: &[&[i64]]) -> Mat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn abelianization_examples() {
        let w = coxeter_presentation(&CoxeterDiagram::lanner_pentagon());
        let ab = abelianization(&w).unwrap();
        assert_eq!((ab.invariant_factors.clone(), ab.betti), (vec![2], 0));
        assert_eq!(ab.to_string(), "Z/2");
        let f2 = Presentation::free(2);
        assert_eq!(abelianization(&f2).unwrap(), AbelianizationReport { invariant_factors: vec![], betti: 2 });
        let d4 = Presentation::new(2, vec![vec![1, 1], vec![2, 2], vec![1, 2, 1, 2, 1, 2, 1, 2]]).unwrap();
        assert_eq!(abelianization(&d4).unwrap(), AbelianizationReport { invariant_factors: vec![2, 2], betti: 0 });
        let z6 = Presentation::new(2, vec![vec![1, 1], vec![2, 2, 2], vec![1, 2, -1, -2]]).unwrap();
        assert_eq!(abelianization(&z6).unwrap().invariant_factors, vec![6]);
    }

    #[test]
    fn maps_examples() {
        let maps = maps_to_z(&Presentation::free(2)).unwrap();
        assert_eq!(maps, vec![Epimorphism { images: vec![1, 0] }, Epimorphism { images: vec![0, 1] }]);
        assert!(maps_to_z(&coxeter_presentation(&CoxeterDiagram::lanner_pentagon())).unwrap().is_empty());
        // <a, b | [a, b] a^2> has exponent sums (2, 0), so abelianization Z/2 + Z.
        let p = Presentation::new(2, vec![vec![1, 2, -1, -2, 1, 1]]).unwrap();
        let maps = maps_to_z(&p).unwrap();
        assert_eq!(maps.len(), 1);
        assert_eq!(maps[0].images[0], 0);
        assert_eq!(maps[0].images[1].abs(), 1);
    }

    #[test]
    fn known_smith_form() {
        let m = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let snf = smith_normal_form(&m, 3).unwrap();
        assert_eq!(snf.diagonal, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        assert_eq!(snf.recompose(), m);
    }

    proptest! {
        #[test]
        fn smith_form_invariants(rows in 0usize..6, cols in 1usize..6, seed in proptest::collection::vec(-9i64..=9, 36)) {
            let m: Mat = (0..rows).map(|i| (0..cols).map(|j| BigInt::from(seed[i * 6 + j])).collect()).collect();
            let snf = smith_normal_form(&m, cols).unwrap();
            prop_assert_eq!(snf.recompose(), m.clone());
            let ud = matmul(&snf.u, &m, rows, cols);
            prop_assert_eq!(matmul(&ud, &snf.v, cols, cols), snf.d_matrix());
            prop_assert_eq!(matmul(&snf.u, &snf.u_inv, rows, rows), identity(rows));
            prop_assert_eq!(matmul(&snf.v, &snf.v_inv, cols, cols), identity(cols));
            let nz: Vec<&BigInt> = snf.diagonal.iter().filter(|d| !d.is_zero()).collect();
            prop_assert!(snf.diagonal.iter().all(|d| !d.is_negative()));
            prop_assert!(snf.diagonal[..nz.len()].iter().all(|d| !d.is_zero()));
            prop_assert!(nz.windows(2).all(|w| w[1].is_multiple_of(w[0])));
        }
    }
}
