//! Factorization patterns of integer polynomials over prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::IntPolynomial;
use crate::error::{Error, Result};

/// Degrees of the irreducible factors mod a prime (with multiplicity,
/// descending) and whether the reduction is squarefree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
pub struct FactorPattern {
    pub prime: u64,
    pub degrees: Vec<usize>,
    pub squarefree: bool,
}

impl FactorPattern {
    pub fn is(&self, degrees: &[usize]) -> bool {
        self.degrees == degrees
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes up to and including `limit`, ascending (sieve of Eratosthenes).
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Dense polynomial over F_p, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Fp {
    p: u64,
    c: Vec<u64>,
}

impl Fp {
    fn new(p: u64, mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Fp { p, c }
    }

    fn one(p: u64) -> Self {
        Fp::new(p, vec![1])
    }

    fn x(p: u64) -> Self {
        Fp::new(p, vec![0, 1])
    }

    fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn is_one(&self) -> bool {
        self.c == [1]
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: u64) -> u64 {
        // Fermat: a^(p-2).
        let (mut base, mut e, mut acc) = (a % self.p, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(acc, base);
            }
            base = self.mulmod(base, base);
            e >>= 1;
        }
        acc
    }

    fn sub(&self, o: &Fp) -> Fp {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = o.c.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        Fp::new(self.p, v)
    }

    fn mul(&self, o: &Fp) -> Fp {
        if self.c.is_empty() || o.c.is_empty() {
            return Fp::new(self.p, Vec::new());
        }
        let mut v = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                v[i + j] = (v[i + j] + self.mulmod(a, b)) % self.p;
            }
        }
        Fp::new(self.p, v)
    }

    fn divrem(&self, d: &Fp) -> (Fp, Fp) {
        let dd = d.deg().expect("division by zero polynomial");
        let lead_inv = self.inv(d.c[dd]);
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Fp::new(self.p, Vec::new()), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = self.mulmod(r[k + dd], lead_inv);
            if coef == 0 {
                continue;
            }
            q[k] = coef;
            for (j, &dc) in d.c.iter().enumerate() {
                r[k + j] = (r[k + j] + self.p - self.mulmod(coef, dc)) % self.p;
            }
        }
        (Fp::new(self.p, q), Fp::new(self.p, r))
    }

    fn rem(&self, d: &Fp) -> Fp {
        self.divrem(d).1
    }

    fn div(&self, d: &Fp) -> Fp {
        self.divrem(d).0
    }

    fn monic(&self) -> Fp {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => {
                let inv = self.inv(l);
                Fp::new(self.p, self.c.iter().map(|&a| self.mulmod(a, inv)).collect())
            }
        }
    }

    fn gcd(&self, o: &Fp) -> Fp {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.c.is_empty() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn derivative(&self) -> Fp {
        let v = self.c.iter().enumerate().skip(1).map(|(k, &a)| self.mulmod(a, k as u64 % self.p)).collect();
        Fp::new(self.p, v)
    }

    /// `self^e mod m`.
    fn powmod(&self, mut e: u64, m: &Fp) -> Fp {
        let mut base = self.rem(m);
        let mut acc = Fp::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// p-th root of a polynomial in x^p (Frobenius is the identity on F_p).
    fn pth_root(&self) -> Fp {
        let p = self.p as usize;
        Fp::new(self.p, self.c.iter().step_by(p).copied().collect())
    }

    /// Squarefree decomposition of a monic polynomial: `(factor, multiplicity)`.
    fn squarefree_parts(&self) -> Vec<(Fp, usize)> {
        let p = self.p as usize;
        let mut out = Vec::new();
        if self.deg().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        if d.c.is_empty() {
            for (g, m) in self.pth_root().squarefree_parts() {
                out.push((g, m * p));
            }
            return out;
        }
        let mut c = self.gcd(&d);
        let mut w = self.div(&c);
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.div(&y);
            if !fac.is_one() {
                out.push((fac.monic(), i));
            }
            i += 1;
            w = y;
            c = c.div(&w);
        }
        if !c.is_one() {
            for (g, m) in c.monic().pth_root().squarefree_parts() {
                out.push((g, m * p));
            }
        }
        out
    }

    /// Distinct-degree factorization of a squarefree monic polynomial:
    /// `(degree, number of irreducible factors of that degree)`.
    fn distinct_degree(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut f = self.clone();
        let x = Fp::x(self.p);
        let mut h = x.rem(&f);
        let mut i = 1;
        while f.deg().unwrap_or(0) >= 2 * i {
            h = h.powmod(self.p, &f);
            let g = f.gcd(&h.sub(&x));
            if !g.is_one() {
                out.push((i, g.deg().unwrap() / i));
                f = f.div(&g);
                h = h.rem(&f);
            }
            i += 1;
        }
        if let Some(d) = f.deg().filter(|&d| d > 0) {
            out.push((d, 1));
        }
        out
    }
}

fn reduce(f: &IntPolynomial, p: u64) -> Fp {
    let pb = BigInt::from(p);
    let c = f.coeffs().iter().map(|a| a.mod_floor(&pb).to_u64().expect("reduced below p")).collect();
    Fp::new(p, c)
}

/// Factor degrees of `f` modulo `prime`.
pub fn factor_pattern_mod_p(f: &IntPolynomial, prime: u64) -> Result<FactorPattern> {
    if !is_prime(prime) {
        return Err(Error::NotPrime(prime));
    }
    if f.is_zero() || (f.leading() % BigInt::from(prime)).is_zero() {
        return Err(Error::PrimeDividesLeading(prime));
    }
    let fp = reduce(f, prime).monic();
    let squarefree = fp.gcd(&fp.derivative()).deg() == Some(0);
    let mut degrees = Vec::new();
    for (part, mult) in fp.squarefree_parts() {
        for (d, count) in part.distinct_degree() {
            degrees.extend(std::iter::repeat_n(d, count * mult));
        }
    }
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    Ok(FactorPattern { prime, degrees, squarefree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn examples() {
        let x2p1 = poly(&[1, 0, 1]);
        let p5 = factor_pattern_mod_p(&x2p1, 5).unwrap();
        assert_eq!((p5.degrees.clone(), p5.squarefree), (vec![1, 1], true));
        let p3 = factor_pattern_mod_p(&x2p1, 3).unwrap();
        assert_eq!((p3.degrees.clone(), p3.squarefree), (vec![2], true));
        assert!(factor_pattern_mod_p(&poly(&[-1, -1, 0, 0, 0, 1]), 5).unwrap().is(&[5]));
        assert!(matches!(factor_pattern_mod_p(&x2p1, 4), Err(Error::NotPrime(4))));
        assert!(matches!(factor_pattern_mod_p(&poly(&[1, 0, 3]), 3), Err(Error::PrimeDividesLeading(3))));
    }

    #[test]
    fn repeated_factors() {
        // (x-1)^4 (x+1) mod 3.
        let f = IntPolynomial::linear_power(1, 4).mul(&poly(&[1, 1]));
        let pat = factor_pattern_mod_p(&f, 3).unwrap();
        assert_eq!(pat.degrees, vec![1, 1, 1, 1, 1]);
        assert!(!pat.squarefree);
        // x^3 - 1 = (x-1)^3 mod 3 has vanishing derivative.
        let pat = factor_pattern_mod_p(&poly(&[-1, 0, 0, 1]), 3).unwrap();
        assert_eq!(pat.degrees, vec![1, 1, 1]);
        // (x^2+1)^2 mod 3: irreducible quadratic squared.
        let g = poly(&[1, 0, 1]).mul(&poly(&[1, 0, 1]));
        assert_eq!(factor_pattern_mod_p(&g, 3).unwrap().degrees, vec![2, 2]);
    }

    #[test]
    fn sieve() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(1000).len(), 168);
        assert!(primes_up_to(1000).iter().all(|&p| is_prime(p)));
    }

    /// Brute-force oracle for small p: count roots and compare with the
    /// number of linear factors (squarefree case).
    fn root_count(f: &IntPolynomial, p: u64) -> usize {
        (0..p).filter(|&r| (f.eval(&BigInt::from(r)) % BigInt::from(p)).is_zero()).count()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]
        #[test]
        fn degrees_sum_and_roots(c in proptest::collection::vec(-20i64..=20, 5), pi in 0usize..10) {
            let mut coeffs = c.clone();
            coeffs.push(1);
            let f = poly(&coeffs);
            let p = primes_up_to(30)[pi];
            let pat = factor_pattern_mod_p(&f, p).unwrap();
            prop_assert_eq!(pat.degrees.iter().sum::<usize>(), 5);
            if pat.squarefree {
                prop_assert_eq!(pat.degrees.iter().filter(|&&d| d == 1).count(), root_count(&f, p));
            }
        }
    }
}
