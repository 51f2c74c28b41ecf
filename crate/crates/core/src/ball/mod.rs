//! Midpoint-radius ("ball") arithmetic over arbitrary-precision binary floats.
//!
//! A [`Ball`] `m ± r` stands for every real number within distance `r` of
//! `m`. Operations return balls that contain every possible exact result for
//! inputs drawn from the argument balls. Midpoints are rounded toward zero
//! at the ball's precision and the rounding error is added to the radius;
//! radii are [`Mag`] values rounded upward.
//!
//! Precision travels with the value: the result of a binary operation uses
//! the larger of the two operand precisions. There is no global state.

mod float;
mod mag;
mod matrix;
mod scalar;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use float::{BigFloat, EXP_LIMIT};
pub use mag::{Mag, MAG_BITS};
pub use matrix::BallMatrix;
pub use scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BallError {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("exponent outside [-2^30, 2^30]")]
    Range,
    #[error("singular: {0}")]
    Singular(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Working precision in bits for ball midpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Precision(u32);

impl Precision {
    pub const MIN: u32 = 2;
    pub const MAX: u32 = 1 << 20;
    pub const DEFAULT: Precision = Precision(512);

    pub fn new(bits: u32) -> Result<Precision, BallError> {
        if (Self::MIN..=Self::MAX).contains(&bits) {
            Ok(Precision(bits))
        } else {
            Err(BallError::Domain("precision must be between 2 and 2^20 bits"))
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// The unit roundoff `2^(1-N)`.
    pub fn unit_roundoff(self) -> Mag {
        Mag::pow2(1 - self.0 as i64)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: BigFloat,
    rad: Mag,
    prec: u32,
}

impl Ball {
    fn build(mid: BigFloat, rad: Mag, prec: u32) -> Result<Ball, BallError> {
        mid.check_range()?;
        Ok(Ball { mid, rad, prec })
    }

    fn expect_range(r: Result<Ball, BallError>) -> Ball {
        match r {
            Ok(b) => b,
            Err(e) => panic!("fatal ball arithmetic failure: {e}"),
        }
    }

    pub fn zero(prec: Precision) -> Ball {
        Ball {
            mid: BigFloat::zero(),
            rad: Mag::ZERO,
            prec: prec.bits(),
        }
    }

    pub fn from_i64(v: i64, prec: Precision) -> Ball {
        Ball::from_bigfloat(&BigFloat::from_i64(v), prec)
    }

    /// Ball around a float, rounding to `prec` with the error in the radius.
    pub fn from_bigfloat(v: &BigFloat, prec: Precision) -> Ball {
        let (mid, rad) = v.round(prec.bits());
        Ball::expect_range(Ball::build(mid, rad, prec.bits()))
    }

    /// Exact ball around a finite `f64` (rounded if `prec < 53`).
    pub fn from_f64(x: f64, prec: Precision) -> Result<Ball, BallError> {
        let v = BigFloat::from_f64(x).ok_or(BallError::Domain("non-finite f64"))?;
        Ok(Ball::from_bigfloat(&v, prec))
    }

    pub fn with_radius(mid: BigFloat, rad: Mag, prec: Precision) -> Result<Ball, BallError> {
        let (m, e) = mid.round(prec.bits());
        Ball::build(m, rad.add(e), prec.bits())
    }

    /// Ball enclosing the exact rational `num / den`.
    pub fn from_ratio(num: i64, den: i64, prec: Precision) -> Result<Ball, BallError> {
        Ball::from_i64(num, prec).div(&Ball::from_i64(den, prec))
    }

    /// Ball enclosing a decimal literal such as `-1.0416e-3`.
    pub fn from_decimal(s: &str, prec: Precision) -> Result<Ball, BallError> {
        let bad = || BallError::Parse(format!("bad decimal literal {s:?}"));
        let s = s.trim();
        let (body, exp10) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (neg, body) = match body.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, body.strip_prefix('+').unwrap_or(body)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let digits: String = format!("{int_part}{frac_part}");
        if !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let mut n: BigInt = digits.parse().map_err(|_| bad())?;
        if neg {
            n = -n;
        }
        let scale = exp10 - frac_part.len() as i64;
        if scale.abs() > 100_000 {
            return Err(bad());
        }
        let ten = BigInt::from(10);
        let p = prec.bits();
        if scale >= 0 {
            let v = BigFloat::from_bigint(n * num_traits::pow(ten, scale as usize));
            let (mid, rad) = v.round(p);
            Ball::build(mid, rad, p)
        } else {
            let den = BigFloat::from_bigint(num_traits::pow(ten, (-scale) as usize));
            let (mid, rad) = BigFloat::from_bigint(n)
                .div_rounded(&den, p)
                .expect("nonzero power of ten");
            Ball::build(mid, rad, p)
        }
    }

    pub fn mid(&self) -> &BigFloat {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn prec(&self) -> Precision {
        Precision(self.prec)
    }

    /// Same ball re-tagged with another working precision (midpoint rounded if needed).
    pub fn set_prec(&self, prec: Precision) -> Ball {
        let (mid, e) = self.mid.round(prec.bits());
        Ball {
            mid,
            rad: self.rad.add(e),
            prec: prec.bits(),
        }
    }

    /// Ball with the same midpoint and a radius enlarged by `r`.
    pub fn inflate(&self, r: Mag) -> Ball {
        Ball {
            mid: self.mid.clone(),
            rad: self.rad.add(r),
            prec: self.prec,
        }
    }

    /// Zero-radius ball at the midpoint.
    pub fn midpoint_ball(&self) -> Ball {
        Ball {
            mid: self.mid.clone(),
            rad: Mag::ZERO,
            prec: self.prec,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Upper bound of `|x|` over the ball.
    pub fn mag_upper(&self) -> Mag {
        self.mid.mag_upper().add(self.rad)
    }

    /// Lower bound of `|x|` over the ball (zero if the ball contains zero).
    pub fn mag_lower(&self) -> Mag {
        self.mid.mag_lower().sub_down(self.rad).unwrap_or(Mag::ZERO)
    }

    /// Upper endpoint as an `f64` rounded upward.
    pub fn upper_f64(&self) -> f64 {
        let (hi, _) = self.mid.add_rounded(&BigFloat::from_mag(self.rad), 64);
        let v = hi.to_f64();
        if v.is_finite() {
            v.next_up()
        } else {
            v
        }
    }

    /// Lower endpoint as an `f64` rounded downward.
    pub fn lower_f64(&self) -> f64 {
        let (lo, _) = self.mid.add_rounded(&BigFloat::from_mag(self.rad).neg(), 64);
        let v = lo.to_f64();
        if v.is_finite() {
            v.next_down()
        } else {
            v
        }
    }

    /// Certainly `> 0` on the whole ball.
    pub fn is_positive(&self) -> bool {
        self.mid.is_positive() && self.mid.mag_lower() > self.rad
    }

    pub fn is_negative(&self) -> bool {
        self.mid.is_negative() && self.mid.mag_lower() > self.rad
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    /// Every point of `self` is strictly less than every point of `o`.
    pub fn certainly_lt(&self, o: &Ball) -> bool {
        o.sub(self).is_positive()
    }

    /// `|x| < bound` for every `x` in the ball.
    pub fn abs_certainly_lt(&self, bound: &Ball) -> bool {
        self.certainly_lt(bound) && self.neg().certainly_lt(bound)
    }

    /// The exact value `v` lies inside the ball.
    pub fn contains(&self, v: &BigFloat) -> bool {
        self.mid.sub_exact(v).mag_upper() <= self.rad
    }

    /// `o` is contained in `self` (checked with upward rounding, so it may
    /// answer `false` for containments that are tight to the last bit).
    pub fn contains_ball(&self, o: &Ball) -> bool {
        self.mid.sub_exact(&o.mid).mag_upper().add(o.rad) <= self.rad
    }

    /// Ball hull: smallest midpoint-radius ball (up to rounding) containing both.
    pub fn union(&self, o: &Ball) -> Ball {
        let prec = self.prec.max(o.prec);
        let (sum, e1) = self.mid.add_rounded(&o.mid, prec + 8);
        let (m, e2) = sum.mul_exact(&BigFloat::from_parts(BigInt::from(1), -1)).round(prec);
        let r1 = self.mid.sub_exact(&m).mag_upper().add(self.rad);
        let r2 = o.mid.sub_exact(&m).mag_upper().add(o.rad);
        Ball {
            mid: m,
            rad: r1.max(r2).add(e1).add(e2),
            prec,
        }
    }

    pub fn checked_add(&self, o: &Ball) -> Result<Ball, BallError> {
        let prec = self.prec.max(o.prec);
        let (mid, e) = self.mid.add_rounded(&o.mid, prec);
        Ball::build(mid, self.rad.add(o.rad).add(e), prec)
    }

    pub fn checked_sub(&self, o: &Ball) -> Result<Ball, BallError> {
        self.checked_add(&o.neg())
    }

    pub fn checked_mul(&self, o: &Ball) -> Result<Ball, BallError> {
        let prec = self.prec.max(o.prec);
        let (mid, e) = self.mid.mul_rounded(&o.mid, prec);
        let rad = self
            .mid
            .mag_upper()
            .mul_up(o.rad)
            .add(o.mid.mag_upper().mul_up(self.rad))
            .add(self.rad.mul_up(o.rad))
            .add(e);
        Ball::build(mid, rad, prec)
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: self.mid.neg(),
            rad: self.rad,
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &Ball) -> Ball {
        Ball::expect_range(self.checked_add(o))
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        Ball::expect_range(self.checked_sub(o))
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        Ball::expect_range(self.checked_mul(o))
    }

    pub fn sqr(&self) -> Ball {
        self.mul(self)
    }

    pub fn mul_i64(&self, k: i64) -> Ball {
        self.mul(&Ball::from_i64(k, self.prec()))
    }

    pub fn add_i64(&self, k: i64) -> Ball {
        self.add(&Ball::from_i64(k, self.prec()))
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Ball {
        let m = BigFloat::from_parts(self.mid.mantissa().clone(), self.mid.exponent() + k);
        let (rm, re) = self.rad.parts();
        let rad = Mag::from_parts_up(rm as u128, re + k);
        Ball::expect_range(Ball::build(m, rad, self.prec))
    }

    pub fn div(&self, o: &Ball) -> Result<Ball, BallError> {
        let prec = self.prec.max(o.prec);
        let den_lo = o
            .mid
            .mag_lower()
            .sub_down(o.rad)
            .ok_or(BallError::Singular("divisor ball contains zero"))?;
        let (q, e) = self
            .mid
            .div_rounded(&o.mid, prec)
            .ok_or(BallError::Singular("divisor ball contains zero"))?;
        // |x/y - mx/my| <= (rx + |mx/my| ry) / (|my| - ry)
        let qabs = q.mag_upper().add(e);
        let num = self.rad.add(qabs.mul_up(o.rad));
        let rad = num
            .div_up(den_lo)
            .ok_or(BallError::Singular("divisor ball contains zero"))?
            .add(e);
        Ball::build(q, rad, prec)
    }

    pub fn recip(&self) -> Result<Ball, BallError> {
        Ball::from_i64(1, self.prec()).div(self)
    }

    pub fn sqrt(&self) -> Result<Ball, BallError> {
        if self.mid.is_negative() || self.mid.mag_lower() <= self.rad {
            if self.rad.is_zero() && self.mid.is_zero() {
                return Ok(Ball::zero(self.prec()));
            }
            return Err(BallError::Domain("square root of a ball that is not strictly positive"));
        }
        let lo = self.mid.mag_lower().sub_down(self.rad).ok_or(BallError::Domain(
            "square root of a ball that is not strictly positive",
        ))?;
        let (s, e) = self.mid.sqrt_rounded(self.prec).expect("positive");
        // |sqrt(x) - sqrt(m)| <= r / (sqrt(m) + sqrt(m - r)) <= r / sqrt(m - r)
        let rad = self
            .rad
            .div_up(lo.sqrt_down())
            .ok_or(BallError::Domain("square root underflow"))?
            .add(e);
        Ball::build(s, rad, self.prec)
    }

    /// Square root of the non-negative part of the ball; useful for norms
    /// whose exact value is known to be non-negative.
    pub fn sqrt_nonneg(&self) -> Result<Ball, BallError> {
        if self.is_positive() {
            return self.sqrt();
        }
        if self.is_negative() {
            return Err(BallError::Domain("square root of a negative ball"));
        }
        let hi = self.mid.mag_upper().add(self.rad).sqrt_up();
        let half = BigFloat::from_mag(hi).mul_exact(&BigFloat::from_parts(BigInt::from(1), -1));
        let (m, e) = half.round(self.prec);
        Ball::build(m, hi.add(e), self.prec)
    }

    pub fn abs(&self) -> Ball {
        if self.mid.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Ball containing `max(x, y)` for all `x` in `self`, `y` in `o`.
    pub fn max(&self, o: &Ball) -> Ball {
        if o.certainly_lt(self) {
            self.clone()
        } else if self.certainly_lt(o) {
            o.clone()
        } else {
            self.union(o)
        }
    }

    /// `mid ± rad` in decimal with the given number of significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        format!("{} ± {}", self.mid.to_decimal(digits), self.rad)
    }

    /// Exact hexadecimal serialization `mid +/- rad`.
    pub fn to_hex(&self) -> String {
        format!(
            "{} +/- {}",
            self.mid.to_hex(),
            BigFloat::from_mag(self.rad).to_hex()
        )
    }

    pub fn from_hex(s: &str, prec: Precision) -> Result<Ball, BallError> {
        let (m, r) = s
            .split_once("+/-")
            .ok_or_else(|| BallError::Parse(format!("bad hex ball {s:?}")))?;
        let mid = BigFloat::from_hex(m)?;
        let rad = BigFloat::from_hex(r)?;
        if rad.is_negative() {
            return Err(BallError::Parse("negative radius".into()));
        }
        Ball::with_radius(mid, rad.mag_upper(), prec)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or(((self.prec as f64) * std::f64::consts::LOG10_2).min(30.0) as usize);
        f.write_str(&self.to_decimal(digits.max(1)))
    }
}

impl Add for Ball {
    type Output = Ball;
    fn add(self, o: Ball) -> Ball {
        Ball::add(&self, &o)
    }
}

impl Sub for Ball {
    type Output = Ball;
    fn sub(self, o: Ball) -> Ball {
        Ball::sub(&self, &o)
    }
}

impl Mul for Ball {
    type Output = Ball;
    fn mul(self, o: Ball) -> Ball {
        Ball::mul(&self, &o)
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball::neg(&self)
    }
}

impl<'a> Add<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn add(self, o: &Ball) -> Ball {
        Ball::add(self, o)
    }
}

impl<'a> Sub<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn sub(self, o: &Ball) -> Ball {
        Ball::sub(self, o)
    }
}

impl<'a> Mul<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn mul(self, o: &Ball) -> Ball {
        Ball::mul(self, o)
    }
}

/// Euclidean norm of a vector of balls.
pub fn norm2(v: &[Ball]) -> Result<Ball, BallError> {
    let prec = v.first().map(|b| b.prec()).unwrap_or_default();
    let sum = v.iter().fold(Ball::zero(prec), |acc, x| &acc + &x.sqr());
    sum.sqrt_nonneg()
}
