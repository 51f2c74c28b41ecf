use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::mag::{decode_f64, Mag};
use super::BallError;

/// Largest allowed binary exponent magnitude.
pub const EXP_LIMIT: i64 = 1 << 30;

/// Binary floating-point number `mant * 2^exp` with an unbounded mantissa.
///
/// Values are kept canonical: the mantissa is odd (or the value is zero with
/// `exp == 0`), so structural equality is numeric equality. Rounding is
/// always toward zero and every rounding operation reports an upper bound on
/// the discarded part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

impl BigFloat {
    pub fn zero() -> BigFloat {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    /// Exact value `mant * 2^exp`.
    pub fn from_parts(mant: BigInt, exp: i64) -> BigFloat {
        let mut f = BigFloat { mant, exp };
        f.canonicalize();
        f
    }

    pub fn from_i64(v: i64) -> BigFloat {
        BigFloat::from_parts(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> BigFloat {
        BigFloat::from_parts(v, 0)
    }

    /// Exact conversion; `None` for non-finite input.
    pub fn from_f64(x: f64) -> Option<BigFloat> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(BigFloat::zero());
        }
        let (m, e) = decode_f64(x.abs());
        let m = BigInt::from(m);
        Some(BigFloat::from_parts(if x < 0.0 { -m } else { m }, e))
    }

    /// Exact value of a magnitude.
    pub fn from_mag(m: Mag) -> BigFloat {
        let (mm, e) = m.parts();
        BigFloat::from_parts(BigInt::from(mm), e)
    }

    fn canonicalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn neg(&self) -> BigFloat {
        BigFloat {
            mant: -self.mant.clone(),
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> BigFloat {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// `t` with `2^(t-1) <= |self| < 2^t`; `None` for zero.
    pub fn top_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.bits() as i64)
        }
    }

    pub(crate) fn check_range(&self) -> Result<(), BallError> {
        match self.top_exp() {
            Some(t) if !(-EXP_LIMIT..=EXP_LIMIT).contains(&t) => Err(BallError::Range),
            _ => Ok(()),
        }
    }

    /// Round `mant * 2^exp` toward zero to `prec` bits.
    fn round_parts(mant: BigInt, exp: i64, prec: u32) -> (BigFloat, Mag) {
        let bits = mant.bits();
        if bits <= prec as u64 {
            return (BigFloat::from_parts(mant, exp), Mag::ZERO);
        }
        let shift = bits - prec as u64;
        let (sign, mag) = mant.into_parts();
        let kept = &mag >> shift;
        let exact = mag.trailing_zeros().unwrap_or(0) >= shift;
        let err = if exact {
            Mag::ZERO
        } else {
            Mag::pow2(exp + shift as i64)
        };
        let value = BigFloat::from_parts(BigInt::from_biguint(sign, kept), exp + shift as i64);
        (value, err)
    }

    /// Round to `prec` bits toward zero, returning the value and an error bound.
    pub fn round(&self, prec: u32) -> (BigFloat, Mag) {
        BigFloat::round_parts(self.mant.clone(), self.exp, prec)
    }

    /// Exact sum; only use when the exponent spread is moderate.
    pub fn add_exact(&self, o: &BigFloat) -> BigFloat {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &o.mant << (o.exp - e) as usize;
        BigFloat::from_parts(a + b, e)
    }

    pub fn sub_exact(&self, o: &BigFloat) -> BigFloat {
        self.add_exact(&o.neg())
    }

    pub fn mul_exact(&self, o: &BigFloat) -> BigFloat {
        BigFloat::from_parts(&self.mant * &o.mant, self.exp + o.exp)
    }

    /// Sum rounded toward zero to `prec` bits with an error bound.
    pub fn add_rounded(&self, o: &BigFloat, prec: u32) -> (BigFloat, Mag) {
        if self.is_zero() {
            return o.round(prec);
        }
        if o.is_zero() {
            return self.round(prec);
        }
        let (ta, tb) = (self.top_exp().unwrap(), o.top_exp().unwrap());
        let (big, small, tbig, tsmall) = if ta >= tb {
            (self, o, ta, tb)
        } else {
            (o, self, tb, ta)
        };
        if tsmall < tbig - prec as i64 - 4 && big.bits() <= prec as u64 {
            // The small term lies entirely below the working precision.
            return (big.clone(), small.mag_upper());
        }
        let e = big.exp.min(small.exp);
        let a = &big.mant << (big.exp - e) as usize;
        let b = &small.mant << (small.exp - e) as usize;
        BigFloat::round_parts(a + b, e, prec)
    }

    pub fn mul_rounded(&self, o: &BigFloat, prec: u32) -> (BigFloat, Mag) {
        BigFloat::round_parts(&self.mant * &o.mant, self.exp + o.exp, prec)
    }

    /// Quotient rounded toward zero; `None` when `o` is zero.
    pub fn div_rounded(&self, o: &BigFloat, prec: u32) -> Option<(BigFloat, Mag)> {
        if o.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some((BigFloat::zero(), Mag::ZERO));
        }
        let want = prec as i64 + 2;
        let s = (want + o.bits() as i64 - self.bits() as i64).max(0);
        let num = &self.mant << s as usize;
        let (q, r) = num.div_rem(&o.mant);
        let qexp = self.exp - s - o.exp;
        let trunc_err = if r.is_zero() {
            Mag::ZERO
        } else {
            Mag::pow2(qexp)
        };
        let (v, e) = BigFloat::round_parts(q, qexp, prec);
        Some((v, e.add(trunc_err)))
    }

    /// Square root rounded toward zero; `None` for negative input.
    pub fn sqrt_rounded(&self, prec: u32) -> Option<(BigFloat, Mag)> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some((BigFloat::zero(), Mag::ZERO));
        }
        let want = 2 * prec as i64 + 4;
        let mut s = (want - self.bits() as i64).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let n = self.mant.magnitude() << s as usize;
        let r = n.sqrt();
        let rexp = (self.exp - s) / 2;
        let trunc_err = if &r * &r == n {
            Mag::ZERO
        } else {
            Mag::pow2(rexp)
        };
        let (v, e) = BigFloat::round_parts(BigInt::from_biguint(Sign::Plus, r), rexp, prec);
        Some((v, e.add(trunc_err)))
    }

    /// Upper bound of `|self|`.
    pub fn mag_upper(&self) -> Mag {
        self.mag_dir(true)
    }

    /// Lower bound of `|self|`.
    pub fn mag_lower(&self) -> Mag {
        self.mag_dir(false)
    }

    fn mag_dir(&self, up: bool) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        let mag = self.mant.magnitude();
        let bits = mag.bits();
        let (m, e, exact) = if bits > 100 {
            let shift = bits - 100;
            let exact = mag.trailing_zeros().unwrap_or(0) >= shift;
            ((mag >> shift).to_u128().unwrap(), self.exp + shift as i64, exact)
        } else {
            (mag.to_u128().unwrap(), self.exp, true)
        };
        if up {
            Mag::from_parts_up(if exact { m } else { m + 1 }, e)
        } else {
            Mag::from_parts_down(m, e)
        }
    }

    /// Nearest-ish `f64` (truncated mantissa), for reporting only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let mag = self.mant.magnitude();
        let bits = mag.bits();
        let (m, e) = if bits > 64 {
            let shift = bits - 64;
            ((mag >> shift).to_u64().unwrap(), self.exp + shift as i64)
        } else {
            (mag.to_u64().unwrap(), self.exp)
        };
        let v = super::mag::ldexp(m as f64, e);
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Exact hexadecimal form `[-]0x<hex>p<exp>`.
    pub fn to_hex(&self) -> String {
        let sign = if self.is_negative() { "-" } else { "" };
        format!("{}0x{:x}p{}", sign, self.mant.magnitude(), self.exp)
    }

    pub fn from_hex(s: &str) -> Result<BigFloat, BallError> {
        let bad = || BallError::Parse(format!("bad hex float {s:?}"));
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let body = body.strip_prefix("0x").ok_or_else(bad)?;
        let (m, e) = body.split_once('p').ok_or_else(bad)?;
        let m = BigUint::parse_bytes(m.as_bytes(), 16).ok_or_else(bad)?;
        let e: i64 = e.parse().map_err(|_| bad())?;
        let m = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, m);
        let v = BigFloat::from_parts(m, e);
        v.check_range()?;
        Ok(v)
    }

    /// Decimal scientific string with `digits` significant digits, truncated.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        // log10(2) ~ 0.30103; estimate the decimal exponent then correct it.
        let top = self.top_exp().unwrap();
        let mut t = ((top - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigUint::from(10u32);
        let scaled = |t: i64| -> BigUint {
            let p = digits as i64 - 1 - t;
            let mut num = self.mant.magnitude().clone();
            let mut den = BigUint::one();
            if p >= 0 {
                num *= ten.pow(p as u32);
            } else {
                den *= ten.pow((-p) as u32);
            }
            if self.exp >= 0 {
                num <<= self.exp as usize;
            } else {
                den <<= (-self.exp) as usize;
            }
            num / den
        };
        let lo = ten.pow(digits as u32 - 1);
        let hi = ten.pow(digits as u32);
        let mut s = scaled(t);
        for _ in 0..4 {
            if s >= hi {
                t += 1;
            } else if s < lo {
                t -= 1;
            } else {
                break;
            }
            s = scaled(t);
        }
        let ds = s.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        let (head, tail) = ds.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{t}")
        } else {
            format!("{sign}{head}.{tail}e{t}")
        }
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, o: &Self) -> Ordering {
        let (sa, so) = (self.mant.sign(), o.mant.sign());
        let rank = |s: Sign| match s {
            Sign::Minus => 0,
            Sign::NoSign => 1,
            Sign::Plus => 2,
        };
        if sa != so {
            return rank(sa).cmp(&rank(so));
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let (ta, to) = (self.top_exp().unwrap(), o.top_exp().unwrap());
        let mag_order = if ta != to {
            ta.cmp(&to)
        } else {
            let e = self.exp.min(o.exp);
            let a = self.mant.magnitude() << (self.exp - e) as usize;
            let b = o.mant.magnitude() << (o.exp - e) as usize;
            a.cmp(&b)
        };
        if sa == Sign::Minus {
            mag_order.reverse()
        } else {
            mag_order
        }
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.write_str(&self.to_decimal(digits))
    }
}
