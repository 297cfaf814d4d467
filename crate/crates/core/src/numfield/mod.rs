//! Exact arithmetic in Q and in the degree-8 real field Q(√2, √3, √5).
//!
//! Every label in {2, 3, 4, 5, 6} has `cos(π/m)` in this field, which is all
//! the compact simplex diagrams need. Signs are decided by dyadic interval
//! refinement, so no floating point is trusted anywhere.

mod algnum;
mod galois;
mod parse;

pub use algnum::{cos_pi_over, radical_position, AlgNum, DEGREE, RADICANDS};
pub(crate) use algnum::mask_of;
pub use galois::GaloisMap;
pub use parse::parse_rational;

/// Reduced rational with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}


#[cfg(test)]
mod tests {
    use super::strategies::*;
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{One, Signed, Zero};
    use proptest::prelude::*;

    fn a(s: &str) -> AlgNum {
        s.parse().unwrap()
    }

    /// Sign from a fixed 120-digit decimal evaluation; independent of the
    /// adaptive dyadic refinement used by `AlgNum::sign`.
    fn decimal_sign(x: &AlgNum) -> i8 {
        let scale = BigInt::from(10).pow(240);
        let coords = x.coords();
        let den = coords.iter().fold(BigInt::one(), |acc, c| {
            num_integer::Integer::lcm(&acc, c.denom())
        });
        let mut total = BigInt::zero();
        let mut slack = BigInt::zero();
        for (c, r) in coords.iter().zip(RADICANDS) {
            let n = c.numer() * (&den / c.denom());
            total += &n * (&scale * r).sqrt();
            slack += n.abs();
        }
        assert!(total.abs() > slack, "decimal oracle too coarse for {x}");
        if total.is_positive() {
            1
        } else {
            -1
        }
    }

    #[test]
    fn product_table_examples() {
        assert_eq!(&a("r2") * &a("r2"), a("2"));
        assert_eq!(&a("1 + r2") * &a("1 - r2"), a("-1"));
        assert_eq!(&a("r6") * &a("r10"), a("2*r15"));
        assert_eq!(&a("r15") * &a("r30"), a("15*r2"));
        assert_eq!(&a("r3") * &a("r5"), a("r15"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            a("r2").checked_div(&AlgNum::zero()),
            Err(crate::Error::DivisionByZero)
        ));
        assert_eq!(a("r2").checked_div(&a("r2")).unwrap(), AlgNum::one());
        assert_eq!(AlgNum::one().checked_div(&a("1 + r2")).unwrap(), a("-1 + r2"));
    }

    #[test]
    fn sign_examples() {
        assert_eq!(AlgNum::zero().sign(), 0);
        assert_eq!(a("r2 - 1").sign(), 1);
        // Decimal oracle: 2√6 - √5 - √3 - 1 = -0.06914..., and without the
        // trailing -1 it is 0.93085...
        let x = a("2*r6 - r5 - r3 - 1");
        assert_eq!(x.sign(), -1);
        assert!((x.to_f64() + 0.069_14).abs() < 1e-4);
        assert_eq!(a("2*r6 - r5 - r3").sign(), 1);
        assert_eq!(a("-1/1000000").sign(), -1);
        // 99/70 is a convergent of √2: the gap is about 7e-5.
        assert_eq!(a("r2 - 99/70").sign(), -1);
        assert_eq!(a("r2 - 140/99").sign(), 1);
    }

    #[test]
    fn galois_examples() {
        let sigma = GaloisMap::new(-1, 1, 1);
        assert_eq!(a("r2").apply_galois(&sigma), a("-r2"));
        assert_eq!(a("r6").apply_galois(&sigma), a("-r6"));
        assert_eq!(a("r15").apply_galois(&sigma), a("r15"));
        for g in GaloisMap::all() {
            assert_eq!(a("-7/3").apply_galois(&g), a("-7/3"));
        }
        assert_eq!(GaloisMap::all().count(), 8);
        assert!(GaloisMap::all().next().unwrap().is_identity());
    }

    #[test]
    fn cos_values() {
        assert_eq!(cos_pi_over(2).unwrap(), AlgNum::zero());
        assert_eq!(cos_pi_over(3).unwrap(), a("1/2"));
        assert_eq!(cos_pi_over(4).unwrap(), a("1/2*r2"));
        assert_eq!(cos_pi_over(6).unwrap(), a("1/2*r3"));
        // cos(π/5) is the positive root of 4x² - 2x - 1.
        let c = cos_pi_over(5).unwrap();
        let poly = &(&a("4") * &(&c * &c)) - &(&(&a("2") * &c) + &AlgNum::one());
        assert!(poly.is_zero());
        assert_eq!(c.sign(), 1);
        assert_eq!(c, a("1/4 + 1/4*r5"));
        for m in 2..=6 {
            let f = (std::f64::consts::PI / f64::from(m)).cos();
            assert!((cos_pi_over(m).unwrap().to_f64() - f).abs() < 1e-12);
        }
        let err = cos_pi_over(7).unwrap_err().to_string();
        assert!(err.contains("2, 3, 4, 5, 6"), "{err}");
    }

    #[test]
    fn parse_and_display() {
        let x = a("1/2 + 3*r2 - r30");
        assert_eq!(x.to_string(), "1/2 + 3*r2 - r30");
        assert_eq!(a("0"), AlgNum::zero());
        assert_eq!(a("-r2"), -a("r2"));
        assert_eq!(a("r2*3/4"), a("3/4*r2"));
        assert_eq!(a("0 + 0*r2 + 1*r3 + 0*r5 + 0*r6 + 0*r10 + 0*r15 + -2/3*r30"), a("r3 - 2/3*r30"));
        assert!("r7".parse::<AlgNum>().is_err());
        assert!("1 +".parse::<AlgNum>().is_err());
        assert!("1/0".parse::<AlgNum>().is_err());
        assert!("".parse::<AlgNum>().is_err());
    }

    #[test]
    fn coords_are_reduced() {
        let x = AlgNum::from_coords(&[
            rational(2, 4),
            rational(-6, 8),
            rational(0, 5),
            rational(0, 1),
            rational(0, 1),
            rational(0, 1),
            rational(0, 1),
            rational(1, 3),
        ]);
        assert_eq!(x.coord(0), rational(1, 2));
        assert_eq!(x.coord(1), rational(-3, 4));
        assert_eq!(x.coord(7), rational(1, 3));
        assert_eq!(x, a("1/2 - 3/4*r2 + 1/3*r30"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn field_axioms(x in algnum(), y in algnum(), z in algnum()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&(&x - &y) + &y, x.clone());
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), AlgNum::one());
            }
        }

        #[test]
        fn galois_is_a_ring_involution(x in algnum(), y in algnum(), g in galois_map()) {
            prop_assert_eq!((&x * &y).apply_galois(&g), &x.apply_galois(&g) * &y.apply_galois(&g));
            prop_assert_eq!((&x + &y).apply_galois(&g), &x.apply_galois(&g) + &y.apply_galois(&g));
            prop_assert_eq!(x.apply_galois(&g).apply_galois(&g), x);
        }

        #[test]
        fn sign_is_multiplicative(x in algnum(), y in algnum()) {
            prop_assert_eq!((&x * &y).sign(), x.sign() * y.sign());
        }

        #[test]
        fn display_round_trips(x in algnum()) {
            prop_assert_eq!(x.to_string().parse::<AlgNum>().unwrap(), x);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn sign_matches_decimal_evaluation(x in nonzero_algnum()) {
            prop_assert_eq!(x.sign(), decimal_sign(&x));
        }
    }
}
