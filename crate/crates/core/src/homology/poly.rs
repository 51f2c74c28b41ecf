//! Integer polynomials: exact division, Sturm sequences and certified
//! isolation of a real root.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ball::{Ball, BallError, Precision};

/// Polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> IntPoly {
        let mut p = IntPoly(coeffs);
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.0
            .iter()
            .map(|c| i64::try_from(c).expect("coefficient fits in i64"))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Quotient and remainder by a monic divisor, exact over the integers.
    pub fn div_rem_monic(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = d.degree().expect("nonzero divisor");
        assert!(d.0[dd].is_one(), "divisor must be monic");
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (IntPoly(Vec::new()), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dj;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn eval_ball(&self, x: &Ball) -> Ball {
        let prec = x.prec();
        self.0.iter().rev().fold(Ball::zero(prec), |acc, c| {
            let c = Ball::from_bigfloat(&crate::ball::BigFloat::from_bigint(c.clone()), prec);
            &(&acc * x) + &c
        })
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...` over the rationals.
    fn sturm_sequence(&self) -> Vec<Vec<BigRational>> {
        let to_rat = |p: &IntPoly| -> Vec<BigRational> {
            p.0.iter().map(|c| BigRational::from_integer(c.clone())).collect()
        };
        let mut seq = vec![to_rat(self), to_rat(&self.derivative())];
        loop {
            let n = seq.len();
            let r = rat_rem(&seq[n - 2], &seq[n - 1]);
            if r.is_empty() {
                break;
            }
            seq.push(r.into_iter().map(|c| -c).collect());
        }
        seq
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        let seq = self.sturm_sequence();
        let changes = |x: &BigRational| -> usize {
            let signs: Vec<i8> = seq
                .iter()
                .map(|p| {
                    let v = p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c);
                    sign(&v)
                })
                .filter(|&s| s != 0)
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        changes(a) - changes(b)
    }

    /// Certified enclosure of the unique root in `(lo, hi]` with radius below `2^-bits`.
    ///
    /// The bracket is first narrowed by exact rational bisection; the final
    /// enclosure is produced by interval Newton, whose contraction
    /// `N(X) ⊂ X` proves that `X` holds a root.
    pub fn isolate_root(&self, lo: i64, hi: i64, bits: u32) -> Result<Ball, PolyError> {
        let mut a = BigRational::from_integer(lo.into());
        let mut b = BigRational::from_integer(hi.into());
        let count = self.count_roots(&a, &b);
        if count != 1 {
            return Err(PolyError::NotIsolated { lo, hi, count });
        }
        let sa = sign(&self.eval_rational(&a));
        let two = BigRational::from_integer(2.into());
        let width = BigRational::new(BigInt::one(), BigInt::one() << 40);
        while &b - &a > width {
            let m = (&a + &b) / &two;
            let sm = sign(&self.eval_rational(&m));
            if sm == 0 {
                a = m.clone();
                b = m;
                break;
            }
            if sm == sa {
                a = m;
            } else {
                b = m;
            }
        }
        let prec = Precision::new(bits + 64)?;
        let ra = rational_ball(&a, prec)?;
        let rb = rational_ball(&b, prec)?;
        let mut x = ra.union(&rb);
        let deriv = self.derivative();
        let target = (-(bits as f64)).exp2();
        for _ in 0..64 {
            let m = x.midpoint_ball();
            let step = self.eval_ball(&m).div(&deriv.eval_ball(&x))?;
            let n = m.sub(&step);
            if !x.contains_ball(&n) {
                return Err(PolyError::NewtonFailed);
            }
            x = n;
            if x.rad().to_f64_up() < target {
                return Ok(x);
            }
        }
        Err(PolyError::NewtonFailed)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PolyError {
    #[error("expected one root in ({lo}, {hi}], found {count}")]
    NotIsolated { lo: i64, hi: i64, count: usize },
    #[error("interval Newton did not contract")]
    NewtonFailed,
    #[error(transparent)]
    Ball(#[from] BallError),
}

fn sign(v: &BigRational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn rat_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r: Vec<BigRational> = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = &r[top] / lead;
        for (j, bj) in b.iter().enumerate() {
            let idx = top - db + j;
            r[idx] = &r[idx] - &c * bj;
        }
        r.pop();
    }
    while r.last().is_some_and(Zero::is_zero) {
        r.pop();
    }
    r
}

fn rational_ball(x: &BigRational, prec: Precision) -> Result<Ball, BallError> {
    let bf = |v: &BigInt| Ball::from_bigfloat(&crate::ball::BigFloat::from_bigint(v.clone()), prec);
    bf(x.numer()).div(&bf(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_division_and_product_agree() {
        let a = IntPoly::from_i64(&[1, -1, 1]);
        let b = IntPoly::from_i64(&[1, -5, -6, -5, -6, -5, 1]);
        let (q, r) = a.mul(&b).div_rem_monic(&b);
        assert_eq!(q, a);
        assert!(r.is_zero());
    }

    #[test]
    fn sturm_counts_roots_of_quadratic() {
        // x^2 - 2 has one root in (1, 2] and none in (2, 5]
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        let r = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(p.count_roots(&r(1), &r(2)), 1);
        assert_eq!(p.count_roots(&r(-2), &r(2)), 2);
        assert_eq!(p.count_roots(&r(2), &r(5)), 0);
    }

    #[test]
    fn isolates_square_root_of_two() {
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        let root = p.isolate_root(1, 2, 200).unwrap();
        assert!(root.rad().to_f64_up() < 1e-60);
        assert!((root.mid_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        let sq = root.sqr();
        assert!(sq.sub(&Ball::from_i64(2, root.prec())).mag_upper().to_f64_up() < 1e-59);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(IntPoly::from_i64(&[1, -5, 0, 1]).to_string(), "1 - 5x + x^3");
    }
}
