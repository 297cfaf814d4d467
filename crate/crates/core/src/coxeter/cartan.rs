use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CoxeterDiagram;
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, Matrix};
use crate::numfield::{cos_pi_over, AlgNum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum CartanKind {
    SymmetricStandard,
    VinbergCompatible,
}

/// Matrix with diagonal 2, nonpositive off-diagonal entries, and `A_ij = 0`
/// exactly when `A_ji = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanMatrix {
    entries: Matrix<AlgNum>,
    kind: CartanKind,
}

/// One off-diagonal pair of a compatibility audit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct PairProduct {
    pub i: usize,
    pub j: usize,
    pub product: String,
    pub expected: String,
    pub ok: bool,
}

impl CartanMatrix {
    pub fn new(entries: Matrix<AlgNum>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::NotSquare { rows: entries.rows(), cols: entries.cols() });
        }
        let n = entries.rows();
        let two = AlgNum::from_integer(2);
        for i in 0..n {
            if entries[(i, i)] != two {
                return Err(Error::InvalidCartan(format!("diagonal entry ({i}, {i}) is {}, expected 2", entries[(i, i)])));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if entries[(i, j)].sign() > 0 {
                    return Err(Error::InvalidCartan(format!("off-diagonal entry ({i}, {j}) is positive")));
                }
                if entries[(i, j)].is_zero() != entries[(j, i)].is_zero() {
                    return Err(Error::InvalidCartan(format!("zero pattern not symmetric at ({i}, {j})")));
                }
            }
        }
        let kind = if entries.is_symmetric() {
            CartanKind::SymmetricStandard
        } else {
            CartanKind::VinbergCompatible
        };
        Ok(CartanMatrix { entries, kind })
    }

    pub fn from_integer(m: &IntMatrix) -> Result<Self> {
        Self::new(m.to_algnum())
    }

    /// The integral Vinberg-compatible Cartan matrix of the Lannér pentagon.
    pub fn pentagon_integral() -> Self {
        Self::from_integer(&IntMatrix::from_i64(&[
            &[2, -1, 0, 0, -1],
            &[-2, 2, -1, 0, 0],
            &[0, -1, 2, -1, 0],
            &[0, 0, -1, 2, -1],
            &[-1, 0, 0, -1, 2],
        ]))
        .expect("valid preset")
    }

    pub fn rank(&self) -> usize {
        self.entries.rows()
    }

    pub fn kind(&self) -> CartanKind {
        self.kind
    }

    pub fn entries(&self) -> &Matrix<AlgNum> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgNum {
        &self.entries[(i, j)]
    }

    pub fn transpose(&self) -> CartanMatrix {
        CartanMatrix { entries: self.entries.transpose(), kind: self.kind }
    }

    pub fn is_integral(&self) -> bool {
        self.entries.as_slice().iter().all(|x| x.to_integer().is_some())
    }

    pub fn to_integer(&self) -> Option<IntMatrix> {
        self.is_integral()
            .then(|| self.entries.map(|x| x.to_integer().expect("checked integral")))
    }

    /// Connected components of the graph of nonzero off-diagonal entries.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let adjacency: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| i != j && !self.entries[(i, j)].is_zero()).collect())
            .collect();
        super::diagram::components_of(&adjacency)
    }

    /// Checks `A_ij * A_ji = 4 cos²(π / m_ij)` for every pair `i < j`.
    pub fn compatibility(&self, d: &CoxeterDiagram) -> Result<Vec<PairProduct>> {
        if d.rank() != self.rank() {
            return Err(Error::DimensionMismatch { expected: d.rank(), got: self.rank() });
        }
        let four = AlgNum::from_integer(4);
        let mut out = Vec::new();
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                let c = cos_pi_over(d.label(i, j))?;
                let expected = &four * &(&c * &c);
                let product = self.entry(i, j) * self.entry(j, i);
                out.push(PairProduct {
                    i,
                    j,
                    ok: product == expected,
                    product: product.to_string(),
                    expected: expected.to_string(),
                });
            }
        }
        Ok(out)
    }

    pub fn is_compatible_with(&self, d: &CoxeterDiagram) -> bool {
        self.compatibility(d).map(|v| v.iter().all(|p| p.ok)).unwrap_or(false)
    }

    /// JSON array of rows; integer entries as numbers, others as strings.
    pub fn to_json(&self) -> Value {
        matrix_to_json(&self.entries)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        Self::new(matrix_from_json(value)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }
}

/// Symmetric Cartan matrix with entries `-2 cos(π / m_ij)`.
pub fn cartan_from_diagram(d: &CoxeterDiagram) -> Result<CartanMatrix> {
    let n = d.rank();
    let two = AlgNum::from_integer(2);
    let mut entries = Matrix::<AlgNum>::identity(n);
    for i in 0..n {
        entries[(i, i)] = two.clone();
        for j in 0..n {
            if i != j {
                entries[(i, j)] = -(&two * &cos_pi_over(d.label(i, j))?);
            }
        }
    }
    Ok(CartanMatrix { entries, kind: CartanKind::SymmetricStandard })
}

pub fn algnum_to_json(x: &AlgNum) -> Value {
    match x.to_integer().and_then(|n| n.to_i64()) {
        Some(n) => Value::from(n),
        None => Value::from(x.to_string()),
    }
}

pub fn matrix_to_json(m: &Matrix<AlgNum>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(algnum_to_json).collect()))
            .collect(),
    )
}

fn entry_from_json(v: &Value) -> Result<AlgNum> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(AlgNum::from_integer(i))
            } else {
                Err(Error::Malformed { value: n.to_string(), msg: "non-integer JSON number; use a string".into() })
            }
        }
        Value::String(s) => s.parse(),
        other => Err(Error::Malformed { value: other.to_string(), msg: "expected integer or string".into() }),
    }
}

pub fn matrix_from_json(value: &Value) -> Result<Matrix<AlgNum>> {
    let rows = value.as_array().ok_or_else(|| Error::Malformed {
        value: value.to_string(),
        msg: "expected an array of rows".into(),
    })?;
    let parsed: Vec<Vec<AlgNum>> = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Malformed { value: row.to_string(), msg: "expected a row array".into() })?
                .iter()
                .map(entry_from_json)
                .collect()
        })
        .collect::<Result<_>>()?;
    Matrix::from_rows(parsed)
}

/// Integer matrix as rows of decimal strings, so arbitrarily large entries survive JSON.
pub fn int_matrix_to_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(BigInt::to_string).collect()).collect()
}

pub fn int_matrix_from_strings(rows: &[Vec<String>]) -> Result<IntMatrix> {
    let parsed: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| s.parse::<BigInt>().map_err(|_| Error::Malformed { value: s.clone(), msg: "not an integer".into() }))
                .collect()
        })
        .collect::<Result<_>>()?;
    Matrix::from_rows(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> AlgNum {
        s.parse().unwrap()
    }

    #[test]
    fn pentagon_cartan_matches_displayed_matrix() {
        let c = cartan_from_diagram(&CoxeterDiagram::lanner_pentagon()).unwrap();
        let expected = [
            ["2", "-r2", "0", "0", "-1"],
            ["-r2", "2", "-1", "0", "0"],
            ["0", "-1", "2", "-1", "0"],
            ["0", "0", "-1", "2", "-1"],
            ["-1", "0", "0", "-1", "2"],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                assert_eq!(c.entry(i, j), &a(e), "entry ({i}, {j})");
            }
        }
        assert_eq!(c.kind(), CartanKind::SymmetricStandard);
        assert!(c.entries().is_symmetric());
        assert_eq!(c.entries().transpose(), *c.entries());
    }

    #[test]
    fn small_diagrams() {
        let one = cartan_from_diagram(&CoxeterDiagram::discrete(1).unwrap()).unwrap();
        assert_eq!(one.entry(0, 0), &a("2"));
        let a2 = cartan_from_diagram(&CoxeterDiagram::path(&[3]).unwrap()).unwrap();
        assert_eq!(a2.to_integer().unwrap(), IntMatrix::from_i64(&[&[2, -1], &[-1, 2]]));
    }

    #[test]
    fn integral_matrix_is_compatible() {
        let ap = CartanMatrix::pentagon_integral();
        assert_eq!(ap.kind(), CartanKind::VinbergCompatible);
        let d = CoxeterDiagram::lanner_pentagon();
        assert!(ap.is_compatible_with(&d));
        let sym = cartan_from_diagram(&d).unwrap();
        // A'_ij A'_ji = (A_ij)^2 for every pair.
        for i in 0..5 {
            for j in i + 1..5 {
                let lhs = ap.entry(i, j) * ap.entry(j, i);
                let rhs = sym.entry(i, j) * sym.entry(i, j);
                assert_eq!(lhs, rhs);
            }
        }
        let mut tampered = ap.to_integer().unwrap();
        tampered[(1, 0)] = BigInt::from(-1);
        let tampered = CartanMatrix::from_integer(&tampered).unwrap();
        let audit = tampered.compatibility(&d).unwrap();
        let bad: Vec<_> = audit.iter().filter(|p| !p.ok).map(|p| (p.i, p.j)).collect();
        assert_eq!(bad, vec![(0, 1)]);
    }

    #[test]
    fn validation() {
        let bad_diag = IntMatrix::from_i64(&[&[1, -1], &[-1, 2]]);
        assert!(CartanMatrix::from_integer(&bad_diag).is_err());
        let positive = IntMatrix::from_i64(&[&[2, 1], &[-1, 2]]);
        assert!(CartanMatrix::from_integer(&positive).is_err());
        let pattern = IntMatrix::from_i64(&[&[2, 0], &[-1, 2]]);
        assert!(CartanMatrix::from_integer(&pattern).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = cartan_from_diagram(&CoxeterDiagram::lanner_pentagon()).unwrap();
        let v = c.to_json();
        assert_eq!(v[0][1], Value::from("-r2"));
        assert_eq!(v[0][4], Value::from(-1));
        assert_eq!(CartanMatrix::from_json(&v).unwrap(), c);
        let ap = CartanMatrix::from_json_str("[[2,-1],[\"-3\",2]]").unwrap();
        assert_eq!(ap.entry(1, 0), &a("-3"));
        assert!(CartanMatrix::from_json_str("[[2,-1.5],[-1,2]]").is_err());
    }
}
