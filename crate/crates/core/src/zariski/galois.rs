//! Galois-group certificates for quintics: a 5-cycle and a transposition
//! generate S5.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{factor_pattern_mod_p, primes_up_to, IntPolynomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum S5Outcome {
    /// Pattern {5} mod `prime_irreducible`; squarefree {2,1,1,1} or {3,2}
    /// mod `prime_transposition` (the cube of a (3,2)-cycle is a transposition).
    Certified { prime_irreducible: u64, prime_transposition: u64, transposition_pattern: Vec<usize> },
    Inconclusive {
        prime_irreducible: Option<u64>,
        prime_transposition: Option<u64>,
        primes_scanned: usize,
    },
}

impl S5Outcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, S5Outcome::Certified { .. })
    }
}

/// Outcome of the irreducibility decision over Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    Unknown,
}

/// Squarefree factor patterns whose Frobenius class contains a transposition
/// or has one as a power.
pub const TRANSPOSITION_PATTERNS: [&[usize]; 2] = [&[2, 1, 1, 1], &[3, 2]];

pub fn is_transposition_pattern(pat: &super::FactorPattern) -> bool {
    pat.squarefree && TRANSPOSITION_PATTERNS.iter().any(|t| pat.is(t))
}

/// Largest |a0| for which the divisor scan is attempted.
const DIVISOR_SCAN_LIMIT: u64 = 1 << 40;
/// Largest number of candidate quadratic factors tried.
const QUADRATIC_SEARCH_LIMIT: u64 = 2_000_000;

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Integer root of a monic polynomial, by scanning divisors of the constant term.
/// `Err(())` when the constant term is too large to scan.
fn integer_root(f: &IntPolynomial) -> std::result::Result<Option<BigInt>, ()> {
    let a0 = f.coeff(0);
    if a0.is_zero() {
        return Ok(Some(BigInt::zero()));
    }
    let a = a0.abs().to_u64().filter(|&a| a <= DIVISOR_SCAN_LIMIT).ok_or(())?;
    for d in divisors(a) {
        for r in [BigInt::from(d), -BigInt::from(d)] {
            if f.eval(&r).is_zero() {
                return Ok(Some(r));
            }
        }
    }
    Ok(None)
}

/// Monic quadratic factor `x² + bx + c` by bounded search validated by exact division.
/// Roots lie in |z| < B = 1 + max|a_i| (Cauchy), so |c| < B² and |b| < 2B.
fn quadratic_factor(f: &IntPolynomial) -> std::result::Result<Option<IntPolynomial>, ()> {
    let deg = f.degree().unwrap_or(0);
    let bound: BigInt = (0..deg).map(|k| f.coeff(k).abs()).max().unwrap_or_default() + 1;
    let b_max = (&bound * BigInt::from(2)).to_i64().ok_or(())?;
    let a0 = f.coeff(0).abs().to_u64().filter(|&a| a <= DIVISOR_SCAN_LIMIT).ok_or(())?;
    let c_max = &bound * &bound;
    let cs: Vec<u64> = divisors(a0).into_iter().filter(|&c| BigInt::from(c) <= c_max).collect();
    let candidates = cs.len() as u64 * 2 * (2 * b_max as u64 + 1);
    if candidates > QUADRATIC_SEARCH_LIMIT {
        return Err(());
    }
    for &c in &cs {
        for c in [c as i64, -(c as i64)] {
            for b in -b_max..=b_max {
                let q = IntPolynomial::from_i64(&[c, b, 1]);
                if f.div_exact_monic(&q).is_some() {
                    return Ok(Some(q));
                }
            }
        }
    }
    Ok(None)
}

/// Subset sums of a multiset of degrees, excluding 0 and the total.
fn proper_subset_sums(degrees: &[usize]) -> BTreeSet<usize> {
    let total: usize = degrees.iter().sum();
    let mut sums = BTreeSet::from([0usize]);
    for &d in degrees {
        let next: Vec<usize> = sums.iter().map(|s| s + d).collect();
        sums.extend(next);
    }
    sums.into_iter().filter(|&s| s > 0 && s < total).collect()
}

/// Decides irreducibility over Q of a monic polynomial of degree at most 5.
///
/// Sound in both directions: `Reducible` only with an exhibited factor,
/// `Irreducible` only when every possible factor degree is excluded, either
/// by mod-p patterns (a rational factor of degree k forces a subset of the
/// factor degrees mod every good prime to sum to k) or by exhaustive search.
pub fn irreducibility_over_q(f: &IntPolynomial, prime_budget: u64) -> Result<Irreducibility> {
    let deg = f.degree().ok_or_else(|| Error::Unsupported("zero polynomial".into()))?;
    if !f.is_monic() || deg > 5 {
        return Err(Error::Unsupported("irreducibility test needs a monic polynomial of degree <= 5".into()));
    }
    if deg <= 1 {
        return Ok(Irreducibility::Irreducible);
    }
    let root = integer_root(f);
    if let Ok(Some(_)) = root {
        return Ok(Irreducibility::Reducible);
    }
    let mut possible: BTreeSet<usize> = (1..deg).collect();
    if root == Ok(None) {
        possible.remove(&1);
        possible.remove(&(deg - 1));
    }
    for p in primes_up_to(prime_budget) {
        if possible.is_empty() {
            break;
        }
        let pat = factor_pattern_mod_p(f, p)?;
        if pat.squarefree {
            let sums = proper_subset_sums(&pat.degrees);
            possible.retain(|k| sums.contains(k));
        }
    }
    if possible.is_empty() {
        return Ok(Irreducibility::Irreducible);
    }
    // Only degree splits 2 + (deg - 2) can remain once linear factors are excluded.
    if possible.iter().any(|&k| k != 2 && k + 2 != deg) {
        return Ok(Irreducibility::Unknown);
    }
    match quadratic_factor(f) {
        Ok(Some(_)) => Ok(Irreducibility::Reducible),
        Ok(None) => Ok(Irreducibility::Irreducible),
        Err(()) => Ok(Irreducibility::Unknown),
    }
}

/// Searches primes up to `prime_budget`, smallest first, for an S5 certificate
/// of a monic quintic. Reducible input is rejected.
pub fn galois_s5_certificate(f: &IntPolynomial, prime_budget: u64) -> Result<S5Outcome> {
    if f.degree() != Some(5) || !f.is_monic() {
        return Err(Error::Unsupported(format!("S5 certificate needs a monic quintic, got {f}")));
    }
    if let Ok(Some(r)) = integer_root(f) {
        return Err(Error::Reducible(format!("{f} has the rational root {r}")));
    }
    let mut five = None;
    let mut transposition = None;
    let mut scanned = 0;
    for p in primes_up_to(prime_budget) {
        if five.is_some() && transposition.is_some() {
            break;
        }
        scanned += 1;
        let pat = factor_pattern_mod_p(f, p)?;
        if five.is_none() && pat.is(&[5]) {
            five = Some(p);
        }
        if transposition.is_none() && is_transposition_pattern(&pat) {
            transposition = Some((p, pat.degrees));
        }
    }
    if let (Some(a), Some((b, pattern))) = (five, transposition.clone()) {
        return Ok(S5Outcome::Certified { prime_irreducible: a, prime_transposition: b, transposition_pattern: pattern });
    }
    if five.is_none() && irreducibility_over_q(f, prime_budget)? == Irreducibility::Reducible {
        return Err(Error::Reducible(format!("{f} has a rational factor")));
    }
    Ok(S5Outcome::Inconclusive {
        prime_irreducible: five,
        prime_transposition: transposition.map(|t| t.0),
        primes_scanned: scanned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn classic_s5_quintic() {
        let f = poly(&[-1, -1, 0, 0, 0, 1]);
        let out = galois_s5_certificate(&f, 100).unwrap();
        let S5Outcome::Certified { prime_irreducible, prime_transposition, transposition_pattern } = out else {
            panic!("expected certificate, got {out:?}");
        };
        assert_eq!(prime_irreducible, 3);
        assert!(factor_pattern_mod_p(&f, prime_irreducible).unwrap().is(&[5]));
        // x^5 - x - 1 = (x^2 + x + 1)(x^3 + x^2 + 1) mod 2.
        assert_eq!((prime_transposition, transposition_pattern), (2, vec![3, 2]));
        let t = factor_pattern_mod_p(&f, prime_transposition).unwrap();
        assert!(is_transposition_pattern(&t));
        // The first squarefree {2,1,1,1} prime is 163 (151 divides the discriminant 2869).
        let first_pure = primes_up_to(200)
            .into_iter()
            .find(|&p| factor_pattern_mod_p(&f, p).map(|t| t.squarefree && t.is(&[2, 1, 1, 1])).unwrap())
            .unwrap();
        assert_eq!(first_pure, 163);
    }

    #[test]
    fn reducible_rejected() {
        let f = IntPolynomial::linear_power(1, 4).mul(&poly(&[1, 1]));
        assert!(matches!(galois_s5_certificate(&f, 100), Err(Error::Reducible(_))));
        // (x^2 + x + 1)(x^3 - x - 1) has no rational root.
        let g = poly(&[1, 1, 1]).mul(&poly(&[-1, -1, 0, 1]));
        assert_eq!(irreducibility_over_q(&g, 100).unwrap(), Irreducibility::Reducible);
        assert!(matches!(galois_s5_certificate(&g, 100), Err(Error::Reducible(_))));
    }

    #[test]
    fn x5_minus_2_has_no_transposition() {
        // Galois group of order 20: no element of cycle type (2) or (3,2).
        let f = poly(&[-2, 0, 0, 0, 0, 1]);
        let out = galois_s5_certificate(&f, 10_000).unwrap();
        match out {
            S5Outcome::Inconclusive { prime_irreducible, prime_transposition, primes_scanned } => {
                assert!(prime_irreducible.is_some());
                assert_eq!(prime_transposition, None);
                assert_eq!(primes_scanned, primes_up_to(10_000).len());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(irreducibility_over_q(&f, 100).unwrap(), Irreducibility::Irreducible);
    }

    #[test]
    fn subset_sums() {
        assert_eq!(proper_subset_sums(&[2, 1, 1, 1]), BTreeSet::from([1, 2, 3, 4]));
        assert_eq!(proper_subset_sums(&[5]), BTreeSet::new());
        assert_eq!(proper_subset_sums(&[3, 2]), BTreeSet::from([2, 3]));
    }
}
