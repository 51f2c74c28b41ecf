//! Inclusion checks for ball arithmetic against exact rational arithmetic.

use k3dyn::ball::{Ball, BigFloat, Mag, Precision};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn pow2(e: i64) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    if e >= 0 {
        num_traits::pow(two, e as usize)
    } else {
        BigRational::one() / num_traits::pow(two, (-e) as usize)
    }
}

fn rat(v: &BigFloat) -> BigRational {
    BigRational::from_integer(v.mantissa().clone()) * pow2(v.exponent())
}

fn rat_mag(m: Mag) -> BigRational {
    let (m, e) = m.parts();
    BigRational::from_integer(BigInt::from(m)) * pow2(e)
}

/// Exact endpoints of a ball.
fn bounds(b: &Ball) -> (BigRational, BigRational) {
    let (m, r) = (rat(b.mid()), rat_mag(b.rad()));
    (&m - &r, m + r)
}

fn encloses(b: &Ball, x: &BigRational) -> bool {
    let (lo, hi) = bounds(b);
    &lo <= x && x <= &hi
}

fn samples(b: &Ball) -> Vec<BigRational> {
    let (lo, hi) = bounds(b);
    let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
    vec![lo, mid, hi]
}

fn arb_ball(prec: u32) -> impl Strategy<Value = Ball> {
    (any::<i32>(), -60i64..60, 0u32..4, -80i64..0).prop_map(move |(m, e, rm, re)| {
        let mid = BigFloat::from_parts(BigInt::from(m), e);
        let rad = if rm == 0 { Mag::ZERO } else { Mag::from_parts_up(rm as u128, re + e) };
        Ball::with_radius(mid, rad, Precision::new(prec).unwrap()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ring_operations_enclose(a in arb_ball(24), b in arb_ball(24)) {
        let (sum, diff, prod) = (a.add(&b), a.sub(&b), a.mul(&b));
        for x in samples(&a) {
            for y in samples(&b) {
                prop_assert!(encloses(&sum, &(&x + &y)));
                prop_assert!(encloses(&diff, &(&x - &y)));
                prop_assert!(encloses(&prod, &(&x * &y)));
            }
        }
    }

    #[test]
    fn division_encloses(a in arb_ball(30), b in arb_ball(30)) {
        match a.div(&b) {
            Ok(q) => {
                for x in samples(&a) {
                    for y in samples(&b) {
                        prop_assert!(!y.is_zero());
                        prop_assert!(encloses(&q, &(&x / &y)));
                    }
                }
            }
            Err(_) => prop_assert!(b.contains_zero()),
        }
    }

    #[test]
    fn sqrt_encloses(a in arb_ball(40)) {
        let a = a.abs();
        match a.sqrt() {
            Ok(s) => {
                let (lo, hi) = bounds(&s);
                for x in samples(&a) {
                    prop_assert!(&hi * &hi >= x);
                    prop_assert!(!lo.is_positive() || &lo * &lo <= x);
                }
            }
            Err(_) => prop_assert!(a.contains_zero()),
        }
    }

    #[test]
    fn rounding_error_within_unit_roundoff(m in any::<i64>(), e in -200i64..200, prec in 8u32..60) {
        let v = BigFloat::from_parts(BigInt::from(m), e);
        let (r, err) = v.round(prec);
        let exact = (rat(&v) - rat(&r)).abs();
        prop_assert!(exact <= rat_mag(err));
        let rel = rat_mag(Precision::new(prec).unwrap().unit_roundoff()) * rat(&v).abs();
        prop_assert!(exact <= rel);
    }
}

#[test]
fn radius_is_never_negative_after_cancellation() {
    let p = Precision::new(64).unwrap();
    let x = Ball::from_ratio(1, 3, p).unwrap();
    let d = x.sub(&x);
    assert!(d.contains_zero());
    assert!(!d.rad().is_zero());
    assert!(rat_mag(d.rad()) >= BigRational::zero());
}
