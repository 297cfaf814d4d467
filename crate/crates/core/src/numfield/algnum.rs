use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{GaloisMap, Rational};
use crate::error::{Error, Result};

/// Number of basis elements of Q(√2, √3, √5) over Q.
pub const DEGREE: usize = 8;

/// Squarefree radicands of the basis, in storage order.
pub const RADICANDS: [u32; DEGREE] = [1, 2, 3, 5, 6, 10, 15, 30];

// Bit i of a mask marks the prime PRIMES[i] under the square root.
const PRIMES: [u32; 3] = [2, 3, 5];
const MASK_OF_POS: [usize; DEGREE] = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];
const POS_OF_MASK: [usize; DEGREE] = [0, 1, 2, 4, 3, 5, 6, 7];

/// Coordinate position of the radical `√r` for a squarefree divisor `r` of 30.
pub fn radical_position(radicand: u32) -> Option<usize> {
    RADICANDS.iter().position(|&r| r == radicand)
}

pub(crate) fn mask_of(pos: usize) -> usize {
    MASK_OF_POS[pos]
}

/// Element of the real field Q(√2, √3, √5).
///
/// Stored as eight integer numerators over one positive common denominator,
/// reduced so that the representation is unique.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgNum {
    num: [BigInt; DEGREE],
    den: BigInt,
}

impl AlgNum {
    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        let mut num: [BigInt; DEGREE] = Default::default();
        num[0] = n.into();
        AlgNum { num, den: BigInt::one() }
    }

    pub fn from_rational(q: &Rational) -> Self {
        let mut num: [BigInt; DEGREE] = Default::default();
        num[0] = q.numer().clone();
        AlgNum::normalized(num, q.denom().clone())
    }

    /// `√radicand` for one of the basis radicands.
    pub fn sqrt(radicand: u32) -> Result<Self> {
        let pos = radical_position(radicand).ok_or_else(|| Error::Malformed {
            value: radicand.to_string(),
            msg: "radicand must be one of 1, 2, 3, 5, 6, 10, 15, 30".into(),
        })?;
        Ok(Self::basis(pos))
    }

    pub fn basis(pos: usize) -> Self {
        let mut num: [BigInt; DEGREE] = Default::default();
        num[pos] = BigInt::one();
        AlgNum { num, den: BigInt::one() }
    }

    pub fn from_coords(coords: &[Rational; DEGREE]) -> Self {
        let den = coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num: [BigInt; DEGREE] = Default::default();
        for (slot, c) in num.iter_mut().zip(coords) {
            *slot = c.numer() * (&den / c.denom());
        }
        AlgNum::normalized(num, den)
    }

    fn normalized(mut num: [BigInt; DEGREE], mut den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut g = den.abs();
        for n in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(n);
        }
        if den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for n in num.iter_mut() {
                *n = &*n / &g;
            }
            den /= g;
        }
        AlgNum { num, den }
    }

    pub fn coord(&self, pos: usize) -> Rational {
        Rational::new(self.num[pos].clone(), self.den.clone())
    }

    pub fn coords(&self) -> [Rational; DEGREE] {
        std::array::from_fn(|i| self.coord(i))
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coord(0))
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        (self.is_rational() && self.den.is_one()).then(|| self.num[0].clone())
    }

    /// Bitmask over positions carrying a nonzero coordinate.
    pub fn support(&self) -> u8 {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_zero())
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    pub fn checked_div(&self, rhs: &AlgNum) -> Result<AlgNum> {
        Ok(self * &rhs.inv()?)
    }

    /// Multiplicative inverse through the product of the seven nontrivial
    /// conjugates, whose product with `self` is the rational norm.
    pub fn inv(&self) -> Result<AlgNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            let mut num: [BigInt; DEGREE] = Default::default();
            num[0] = self.den.clone();
            return Ok(AlgNum::normalized(num, self.num[0].clone()));
        }
        let cofactor = GaloisMap::all()
            .filter(|g| !g.is_identity())
            .fold(AlgNum::one(), |acc, g| &acc * &self.apply_galois(&g));
        let norm = (self * &cofactor)
            .to_rational()
            .expect("norm of a field element is rational");
        Ok(&cofactor * &AlgNum::from_rational(&norm.recip()))
    }

    pub fn apply_galois(&self, g: &GaloisMap) -> AlgNum {
        let mut num = self.num.clone();
        for (pos, n) in num.iter_mut().enumerate() {
            if g.sign_of_mask(mask_of(pos)) < 0 {
                *n = -&*n;
            }
        }
        AlgNum { num, den: self.den.clone() }
    }

    /// Exact sign in {-1, 0, 1}.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if self.is_rational() {
            return sign_of(&self.num[0]);
        }
        // den > 0, so the sign is that of sum num[i] * sqrt(RADICANDS[i]).
        let mut bits = 64u64;
        loop {
            let scale = BigInt::one() << (2 * bits);
            let mut lower = BigInt::zero();
            let mut upper = BigInt::zero();
            for (pos, n) in self.num.iter().enumerate() {
                if n.is_zero() {
                    continue;
                }
                let target = &scale * RADICANDS[pos];
                let root = target.sqrt();
                let exact = &root * &root == target;
                let hi = if exact { root.clone() } else { &root + 1u32 };
                if n.is_positive() {
                    lower += n * &root;
                    upper += n * &hi;
                } else {
                    lower += n * &hi;
                    upper += n * &root;
                }
            }
            if lower.is_positive() {
                return 1;
            }
            if upper.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    pub fn abs(&self) -> AlgNum {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Floating-point approximation, for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        self.num
            .iter()
            .zip(RADICANDS)
            .map(|(n, r)| n.to_f64().unwrap_or(f64::NAN) * f64::from(r).sqrt())
            .sum::<f64>()
            / den
    }
}

fn sign_of(n: &BigInt) -> i8 {
    if n.is_positive() {
        1
    } else if n.is_negative() {
        -1
    } else {
        0
    }
}

impl Default for AlgNum {
    fn default() -> Self {
        AlgNum::zero()
    }
}

impl Zero for AlgNum {
    fn zero() -> Self {
        AlgNum { num: Default::default(), den: BigInt::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }
}

impl One for AlgNum {
    fn one() -> Self {
        AlgNum::from_integer(1)
    }
}

impl From<i64> for AlgNum {
    fn from(n: i64) -> Self {
        AlgNum::from_integer(n)
    }
}

impl From<BigInt> for AlgNum {
    fn from(n: BigInt) -> Self {
        AlgNum::from_integer(n)
    }
}

impl From<Rational> for AlgNum {
    fn from(q: Rational) -> Self {
        AlgNum::from_rational(&q)
    }
}

impl<'a> Add<&'a AlgNum> for &'a AlgNum {
    type Output = AlgNum;

    fn add(self, rhs: &AlgNum) -> AlgNum {
        if self.den == rhs.den {
            let num = std::array::from_fn(|i| &self.num[i] + &rhs.num[i]);
            return AlgNum::normalized(num, self.den.clone());
        }
        let num = std::array::from_fn(|i| &self.num[i] * &rhs.den + &rhs.num[i] * &self.den);
        AlgNum::normalized(num, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a AlgNum> for &'a AlgNum {
    type Output = AlgNum;

    fn sub(self, rhs: &AlgNum) -> AlgNum {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a AlgNum> for &'a AlgNum {
    type Output = AlgNum;

    fn mul(self, rhs: &AlgNum) -> AlgNum {
        let mut num: [BigInt; DEGREE] = Default::default();
        for (p, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ma = MASK_OF_POS[p];
            for (q, b) in rhs.num.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mb = MASK_OF_POS[q];
                let common = ma & mb;
                let factor: u32 = (0..3)
                    .filter(|bit| common & (1 << bit) != 0)
                    .map(|bit| PRIMES[bit])
                    .product();
                let target = POS_OF_MASK[ma ^ mb];
                num[target] += a * b * factor;
            }
        }
        AlgNum::normalized(num, &self.den * &rhs.den)
    }
}

impl Neg for &AlgNum {
    type Output = AlgNum;

    fn neg(self) -> AlgNum {
        AlgNum {
            num: std::array::from_fn(|i| -&self.num[i]),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr<AlgNum> for AlgNum {
            type Output = AlgNum;
            fn $f(self, rhs: AlgNum) -> AlgNum {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for AlgNum {
    type Output = AlgNum;

    fn neg(self) -> AlgNum {
        -&self
    }
}

impl PartialOrd for AlgNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgNum {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        (self - other).sign().cmp(&0)
    }
}

impl fmt::Debug for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgNum({self})")
    }
}

impl fmt::Display for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for pos in 0..DEGREE {
            let c = self.coord(pos);
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if pos == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "r{}", RADICANDS[pos])?;
            } else {
                write!(f, "{mag}*r{}", RADICANDS[pos])?;
            }
        }
        Ok(())
    }
}

/// Exact value of `cos(π/m)` for the labels used in compact simplex diagrams.
pub fn cos_pi_over(m: u32) -> Result<AlgNum> {
    let half = Rational::new(1.into(), 2.into());
    let quarter = Rational::new(1.into(), 4.into());
    let value = match m {
        2 => AlgNum::zero(),
        3 => AlgNum::from_rational(&half),
        4 => &AlgNum::sqrt(2)? * &AlgNum::from_rational(&half),
        5 => &(&AlgNum::one() + &AlgNum::sqrt(5)?) * &AlgNum::from_rational(&quarter),
        6 => &AlgNum::sqrt(3)? * &AlgNum::from_rational(&half),
        _ => return Err(Error::UnsupportedLabel(m)),
    };
    Ok(value)
}
