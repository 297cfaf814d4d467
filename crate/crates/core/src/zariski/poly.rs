use std::borrow::Cow;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::numfield::Rational;

/// Polynomial with integer coefficients, stored from the constant term up.
///
/// Serialized as an array of decimal coefficient strings, constant term first.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    /// Coefficients from the constant term up.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> IntPolynomial {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect())
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Exact quotient by a monic divisor, or `None` when the remainder is nonzero.
    pub fn div_exact_monic(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        let d = divisor.degree()?;
        assert!(divisor.is_monic(), "monic divisor required");
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return rem.iter().all(Zero::is_zero).then(|| Self::new(Vec::new()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = rem[k + d].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.iter().all(Zero::is_zero).then(|| Self::new(quot))
    }

    /// `(x - r)^k` expanded.
    pub fn linear_power(r: i64, k: usize) -> IntPolynomial {
        (0..k).fold(Self::from_i64(&[1]), |acc, _| acc.mul(&Self::from_i64(&[-r, 1])))
    }

    /// Squarefree over Q, by exact Euclid on `gcd(f, f')`.
    pub fn is_squarefree_over_q(&self) -> bool {
        let to_q = |p: &IntPolynomial| p.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect::<Vec<_>>();
        let g = rational_gcd(to_q(self), to_q(&self.derivative()));
        g.len() <= 1
    }
}

fn trim_q(v: &mut Vec<Rational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn rational_gcd(mut a: Vec<Rational>, mut b: Vec<Rational>) -> Vec<Rational> {
    trim_q(&mut a);
    trim_q(&mut b);
    while !b.is_empty() {
        let db = b.len() - 1;
        let lead = b[db].clone();
        while a.len() > db {
            let k = a.len() - 1 - db;
            let c = a[a.len() - 1].clone() / lead.clone();
            for (j, bc) in b.iter().enumerate() {
                a[k + j] = a[k + j].clone() - c.clone() * bc.clone();
            }
            trim_q(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

impl fmt::Display for IntPolynomial {
    /// Descending powers, e.g. `x^5 - x - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let mono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if k == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl From<IntPolynomial> for Vec<String> {
    fn from(p: IntPolynomial) -> Self {
        p.coeffs.iter().map(ToString::to_string).collect()
    }
}

impl TryFrom<Vec<String>> for IntPolynomial {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        let coeffs = v
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|_| Error::Malformed { value: s.clone(), msg: "not an integer".into() }))
            .collect::<Result<_>>()?;
        Ok(Self::new(coeffs))
    }
}

impl schemars::JsonSchema for IntPolynomial {
    fn schema_name() -> Cow<'static, str> {
        "IntPolynomial".into()
    }

    fn json_schema(generator: &mut schemars::SchemaGenerator) -> schemars::Schema {
        <Vec<String>>::json_schema(generator)
    }
}

/// Characteristic polynomial `det(xI - m)` by the Faddeev–LeVerrier
/// recursion; every division by `k` is exact over the integers.
pub fn char_poly(m: &IntMatrix) -> Result<IntPolynomial> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = m * &mk;
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        mk = next;
        let tr = (m * &mk).trace();
        let (q, r) = (-tr).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
        coeffs[n - k] = q;
    }
    Ok(IntPolynomial::new(coeffs))
}
