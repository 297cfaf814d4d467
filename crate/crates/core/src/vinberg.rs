//! The reflection representation `ρ(s_i)(v) = v - (vᵀ A e_i) e_i` of a
//! Cartan matrix, Coxeter relation checks, words, and invariant bilinear forms.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
#[cfg(test)]
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coxeter::{CartanMatrix, CoxeterDiagram};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, FieldScalar, IntMatrix, Matrix, Scalar};
use crate::numfield::{AlgNum, Rational};

/// Default cap on the order search in [`verify_relations`].
pub const DEFAULT_ORDER_CAP: u32 = 50;

/// A matrix together with the word (0-based generator indices) it represents.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<T> {
    pub matrix: Matrix<T>,
    pub word: Vec<usize>,
}

pub type IntElement = GroupElement<BigInt>;

impl<T: Scalar> GroupElement<T> {
    pub fn identity(n: usize) -> Self {
        GroupElement { matrix: Matrix::identity(n), word: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Product `self · other`, with concatenated words.
    pub fn mul(&self, other: &GroupElement<T>) -> GroupElement<T> {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        GroupElement { matrix: &self.matrix * &other.matrix, word }
    }
}

/// Reflections `I - e_i (A e_i)ᵀ`: row `i` of the identity becomes
/// `e_iᵀ` minus the `i`-th column of `a`.
pub fn reflection_generators_from_matrix<T: Scalar>(a: &Matrix<T>) -> Result<Vec<GroupElement<T>>> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    let two = T::one() + T::one();
    (0..n)
        .map(|i| {
            if a[(i, i)] != two {
                return Err(Error::InvalidCartan(format!(
                    "diagonal entry ({i}, {i}) is {:?}; reflections need 2",
                    a[(i, i)]
                )));
            }
            let mut m = Matrix::<T>::identity(n);
            for j in 0..n {
                m[(i, j)] = m[(i, j)].clone() - a[(j, i)].clone();
            }
            Ok(GroupElement { matrix: m, word: vec![i] })
        })
        .collect()
}

/// Field-valued generators, valid for every Cartan matrix.
pub fn reflection_generators(a: &CartanMatrix) -> Result<Vec<GroupElement<AlgNum>>> {
    reflection_generators_from_matrix(a.entries())
}

/// Integer generators; requires integral entries.
pub fn integer_reflection_generators(a: &CartanMatrix) -> Result<Vec<IntElement>> {
    let m = a
        .to_integer()
        .ok_or_else(|| Error::InvalidCartan("integer reflection generators need integer entries".into()))?;
    reflection_generators_from_matrix(&m)
}

/// Ordered product of generators; the empty word gives the identity.
pub fn evaluate_word<T: Scalar>(gens: &[GroupElement<T>], word: &[usize]) -> Result<GroupElement<T>> {
    let n = dimension(gens)?;
    let mut m = Matrix::<T>::identity(n);
    for &w in word {
        let g = gens.get(w).ok_or(Error::IndexOutOfRange { index: w, len: gens.len() })?;
        m = &m * &g.matrix;
    }
    Ok(GroupElement { matrix: m, word: word.to_vec() })
}

fn dimension<T: Scalar>(gens: &[GroupElement<T>]) -> Result<usize> {
    let n = gens.first().map(GroupElement::dim).ok_or_else(|| Error::Unsupported("empty generator list".into()))?;
    if let Some(g) = gens.iter().find(|g| g.dim() != n || !g.matrix.is_square()) {
        return Err(Error::DimensionMismatch { expected: n, got: g.dim() });
    }
    Ok(n)
}

/// Order of `ρ(s_i) ρ(s_j)` for one pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct PairOrder {
    pub i: usize,
    pub j: usize,
    /// `None` when the order exceeds the cap.
    pub order: Option<u32>,
    pub expected: u32,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct RelationReport {
    pub cap: u32,
    pub pairs: Vec<PairOrder>,
    pub all_pass: bool,
}

/// Smallest `k <= cap` with `m^k = I`.
pub fn element_order<T: Scalar>(m: &Matrix<T>, cap: u32) -> Option<u32> {
    let mut power = m.clone();
    for k in 1..=cap {
        if power.is_identity() {
            return Some(k);
        }
        power = &power * m;
    }
    None
}

/// Checks that `ρ(s_i) ρ(s_j)` has order exactly `m_ij` for every pair `i < j`.
pub fn verify_relations<T: Scalar>(gens: &[GroupElement<T>], d: &CoxeterDiagram, cap: u32) -> Result<RelationReport> {
    if gens.len() != d.rank() {
        return Err(Error::DimensionMismatch { expected: d.rank(), got: gens.len() });
    }
    let mut pairs = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let order = element_order(&(&gens[i].matrix * &gens[j].matrix), cap);
            let expected = d.label(i, j);
            pairs.push(PairOrder { i, j, order, expected, pass: order == Some(expected) });
        }
    }
    Ok(RelationReport { cap, all_pass: pairs.iter().all(|p| p.pass), pairs })
}

/// Basis of `{B : gᵀ B g = B for every generator g}`.
pub fn invariant_bilinear_forms<F: FieldScalar>(n: usize, gens: &[Matrix<F>]) -> Result<Vec<Matrix<F>>> {
    if let Some(g) = gens.iter().find(|g| g.rows() != n || g.cols() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: g.rows() });
    }
    let unknowns = n * n;
    if gens.is_empty() {
        return Ok((0..unknowns).map(|k| Matrix::from_fn(n, n, |a, b| if a * n + b == k { F::one() } else { F::zero() })).collect());
    }
    // Row (k, l) of block g: Σ_{a,b} g_ak g_bl B_ab - B_kl.
    let mut system = Matrix::<F>::zeros(gens.len() * unknowns, unknowns);
    for (gi, g) in gens.iter().enumerate() {
        for k in 0..n {
            for l in 0..n {
                let row = gi * unknowns + k * n + l;
                for a in 0..n {
                    if g[(a, k)].is_zero() {
                        continue;
                    }
                    for b in 0..n {
                        if g[(b, l)].is_zero() {
                            continue;
                        }
                        let v = system[(row, a * n + b)].clone() + g[(a, k)].clone() * g[(b, l)].clone();
                        system[(row, a * n + b)] = v;
                    }
                }
                let v = system[(row, k * n + l)].clone() - F::one();
                system[(row, k * n + l)] = v;
            }
        }
    }
    Ok(nullspace(&system)
        .into_iter()
        .map(|v| Matrix::from_fn(n, n, |a, b| v[a * n + b].clone()))
        .collect())
}

/// Invariant forms of integer generators, solved over Q.
pub fn invariant_forms_integer(gens: &[IntElement]) -> Result<Vec<Matrix<Rational>>> {
    let n = dimension(gens)?;
    let mats: Vec<Matrix<Rational>> = gens.iter().map(|g| g.matrix.to_rational()).collect();
    invariant_bilinear_forms(n, &mats)
}

/// Integer matrix as JSON rows; entries outside i64 become decimal strings.
pub fn int_matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    m.row(i)
                        .iter()
                        .map(|x| x.to_i64().map(Value::from).unwrap_or_else(|| Value::from(x.to_string())))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn int_matrix_from_json(v: &Value) -> Result<IntMatrix> {
    let malformed = |v: &Value, msg: &str| Error::Malformed { value: v.to_string(), msg: msg.into() };
    let rows = v.as_array().ok_or_else(|| malformed(v, "expected an array of rows"))?;
    let parsed = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| malformed(r, "expected a row array"))?
                .iter()
                .map(|x| match x {
                    Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| malformed(x, "expected an integer")),
                    Value::String(s) => s.parse::<BigInt>().map_err(|_| malformed(x, "expected an integer")),
                    _ => Err(malformed(x, "expected an integer")),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(parsed)
}

/// Generator set as a JSON array of integer row-major matrices.
pub fn generators_to_json(gens: &[IntElement]) -> Value {
    Value::Array(gens.iter().map(|g| int_matrix_to_json(&g.matrix)).collect())
}

/// Reads a generator list; generator `k` carries the word `[k]`.
pub fn generators_from_json(v: &Value) -> Result<Vec<IntElement>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Malformed { value: v.to_string(), msg: "expected an array of matrices".into() })?;
    let gens: Vec<IntElement> = arr
        .iter()
        .enumerate()
        .map(|(k, m)| Ok(GroupElement { matrix: int_matrix_from_json(m)?, word: vec![k] }))
        .collect::<Result<_>>()?;
    dimension(&gens)?;
    Ok(gens)
}

/// Determinant sign expected of a word in reflections.
pub fn expected_det(word_len: usize) -> BigInt {
    if word_len.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `true` when `a` and `b` commute.
pub fn commute<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> bool {
    a * b == b * a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::cartan_from_diagram;
    use proptest::prelude::*;

    fn pentagon_gens() -> Vec<IntElement> {
        integer_reflection_generators(&CartanMatrix::pentagon_integral()).unwrap()
    }

    #[test]
    fn first_generator_matches_formula() {
        let g = pentagon_gens();
        let expected = IntMatrix::from_i64(&[
            &[-1, 2, 0, 0, 1],
            &[0, 1, 0, 0, 0],
            &[0, 0, 1, 0, 0],
            &[0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 1],
        ]);
        assert_eq!(g[0].matrix, expected);
        for s in &g {
            assert!((&s.matrix * &s.matrix).is_identity());
            assert_eq!(s.matrix.det(), BigInt::from(-1));
        }
    }

    #[test]
    fn formula_acts_on_vectors() {
        // ρ(s_i)(v) = v - (vᵀ A' e_i) e_i, checked on basis vectors.
        let a = CartanMatrix::pentagon_integral().to_integer().unwrap();
        let g = pentagon_gens();
        for i in 0..5 {
            for k in 0..5 {
                let mut v = vec![BigInt::zero(); 5];
                v[k] = BigInt::one();
                let mut expected = v.clone();
                expected[i] -= &a[(k, i)];
                assert_eq!(g[i].matrix.mul_vec(&v), expected);
            }
        }
    }

    #[test]
    fn diagonal_other_than_two_rejected() {
        let m = IntMatrix::from_i64(&[&[1, -1], &[-1, 2]]);
        assert!(matches!(reflection_generators_from_matrix(&m), Err(Error::InvalidCartan(_))));
    }

    #[test]
    fn relations_hold_for_both_representations() {
        let d = CoxeterDiagram::lanner_pentagon();
        let r = verify_relations(&pentagon_gens(), &d, 12).unwrap();
        assert!(r.all_pass);
        assert_eq!(r.pairs.len(), 10);
        let order = |i, j| r.pairs.iter().find(|p| p.i == i && p.j == j).unwrap().order;
        assert_eq!(order(0, 1), Some(4));
        assert_eq!(order(1, 2), Some(3));
        assert_eq!(order(0, 4), Some(3));
        assert_eq!(order(0, 2), Some(2));
        let sym = reflection_generators(&cartan_from_diagram(&d).unwrap()).unwrap();
        assert!(verify_relations(&sym, &d, 12).unwrap().all_pass);
    }

    #[test]
    fn tampered_matrix_fails_one_pair() {
        let mut m = CartanMatrix::pentagon_integral().to_integer().unwrap();
        m[(1, 0)] = BigInt::from(-1);
        let gens = reflection_generators_from_matrix(&m).unwrap();
        let r = verify_relations(&gens, &CoxeterDiagram::lanner_pentagon(), 12).unwrap();
        let failed: Vec<_> = r.pairs.iter().filter(|p| !p.pass).collect();
        assert_eq!(failed.len(), 1);
        assert_eq!((failed[0].i, failed[0].j, failed[0].order), (0, 1, Some(3)));
    }

    #[test]
    fn rank_one_is_vacuous_and_cap_reported() {
        let d = CoxeterDiagram::discrete(1).unwrap();
        let gens = reflection_generators(&cartan_from_diagram(&d).unwrap()).unwrap();
        assert!(verify_relations(&gens, &d, 12).unwrap().all_pass);
        // [[2,-2],[-2,2]] generates the infinite dihedral group.
        let affine = IntMatrix::from_i64(&[&[2, -2], &[-2, 2]]);
        let gens = reflection_generators_from_matrix(&affine).unwrap();
        assert_eq!(element_order(&(&gens[0].matrix * &gens[1].matrix), 50), None);
    }

    #[test]
    fn words() {
        let g = pentagon_gens();
        let e = evaluate_word(&g, &[]).unwrap();
        assert!(e.matrix.is_identity());
        assert_eq!(e.matrix.det(), BigInt::one());
        assert_eq!(evaluate_word(&g, &[0]).unwrap().matrix, g[0].matrix);
        let w = evaluate_word(&g, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(w.matrix.det(), BigInt::from(-1));
        assert_eq!(w.word, vec![0, 1, 2, 3, 4]);
        assert!(matches!(evaluate_word(&g, &[5]), Err(Error::IndexOutOfRange { index: 5, len: 5 })));
        assert_eq!(g[0].mul(&g[1]).matrix, evaluate_word(&g, &[0, 1]).unwrap().matrix);
    }

    #[test]
    fn invariant_forms() {
        assert!(invariant_forms_integer(&pentagon_gens()).unwrap().is_empty());
        let a = cartan_from_diagram(&CoxeterDiagram::lanner_pentagon()).unwrap();
        let sym = reflection_generators(&a).unwrap();
        let mats: Vec<_> = sym.iter().map(|g| g.matrix.clone()).collect();
        let forms = invariant_bilinear_forms(5, &mats).unwrap();
        assert_eq!(forms.len(), 1);
        // The solution is proportional to A.
        let b = &forms[0];
        let scale = b[(0, 0)].checked_div(&a.entry(0, 0).clone()).unwrap();
        assert_eq!(*b, a.entries().map(|x| x * &scale));
        for g in &mats {
            assert_eq!(&(&g.transpose() * a.entries()) * g, *a.entries());
        }
        assert_eq!(invariant_bilinear_forms::<Rational>(3, &[]).unwrap().len(), 9);
    }

    #[test]
    fn json_round_trip() {
        let g = pentagon_gens();
        let v = generators_to_json(&g);
        assert_eq!(v[0][0], serde_json::json!([-1, 2, 0, 0, 1]));
        assert_eq!(generators_from_json(&v).unwrap(), g);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn word_determinant(word in proptest::collection::vec(0usize..5, 0..=30)) {
            let g = pentagon_gens();
            let e = evaluate_word(&g, &word).unwrap();
            prop_assert_eq!(e.matrix.det(), expected_det(word.len()));
        }
    }
}
