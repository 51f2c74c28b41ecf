use std::cmp::Ordering;
use std::fmt;

/// Number of mantissa bits kept by [`Mag`].
pub const MAG_BITS: u32 = 53;

const MAG_LO: u64 = 1 << (MAG_BITS - 1);
const MAG_HI: u64 = 1 << MAG_BITS;

/// Unsigned low-precision magnitude `m * 2^e`, used for ball radii.
///
/// Every operation has an explicit rounding direction; the `_up` variants
/// return a value no smaller than the exact result, the `_down` variants
/// one no larger. Nonzero values keep `m` in `[2^52, 2^53)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mag {
    m: u64,
    e: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0, e: 0 };

    fn normalize(m: u128, e: i64, up: bool) -> Mag {
        if m == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - m.leading_zeros();
        if bits > MAG_BITS {
            let shift = bits - MAG_BITS;
            let mut mm = (m >> shift) as u64;
            let mut e = e + shift as i64;
            if up && (m & ((1u128 << shift) - 1)) != 0 {
                mm += 1;
                if mm == MAG_HI {
                    mm = MAG_LO;
                    e += 1;
                }
            }
            Mag { m: mm, e }
        } else {
            let shift = MAG_BITS - bits;
            Mag {
                m: (m << shift) as u64,
                e: e - shift as i64,
            }
        }
    }

    /// Smallest `Mag` that is at least `m * 2^e`.
    pub fn from_parts_up(m: u128, e: i64) -> Mag {
        Mag::normalize(m, e, true)
    }

    /// Largest `Mag` that is at most `m * 2^e`.
    pub fn from_parts_down(m: u128, e: i64) -> Mag {
        Mag::normalize(m, e, false)
    }

    pub fn pow2(e: i64) -> Mag {
        Mag {
            m: MAG_LO,
            e: e - (MAG_BITS as i64 - 1),
        }
    }

    pub fn from_u64(v: u64) -> Mag {
        Mag::from_parts_up(v as u128, 0)
    }

    /// Upper bound for a finite non-negative `f64`; `None` for negative or
    /// non-finite input.
    pub fn from_f64_up(x: f64) -> Option<Mag> {
        if !x.is_finite() || x < 0.0 {
            return None;
        }
        if x == 0.0 {
            return Some(Mag::ZERO);
        }
        let (m, e) = decode_f64(x);
        Some(Mag::from_parts_up(m as u128, e))
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0
    }

    /// Raw parts `(m, e)` with value `m * 2^e`.
    pub fn parts(&self) -> (u64, i64) {
        (self.m, self.e)
    }

    /// Exponent `t` with `2^(t-1) <= self < 2^t`; `None` for zero.
    pub fn top_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.e + MAG_BITS as i64)
        }
    }

    pub fn add(self, o: Mag) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (a, b) = if self.e >= o.e { (self, o) } else { (o, self) };
        let diff = a.e - b.e;
        if diff > 64 {
            // b is below one unit in the last place of a.
            return Mag::from_parts_up(a.m as u128 + 1, a.e);
        }
        Mag::from_parts_up(((a.m as u128) << diff) + b.m as u128, b.e)
    }

    /// Lower bound of `self - o`, or `None` when that lower bound is not positive.
    pub fn sub_down(self, o: Mag) -> Option<Mag> {
        if o.is_zero() {
            return if self.is_zero() { None } else { Some(self) };
        }
        if self.is_zero() || o.e > self.e {
            return None;
        }
        let diff = self.e - o.e;
        if diff > 64 {
            return Some(Mag::from_parts_down(self.m as u128 - 1, self.e));
        }
        let a = (self.m as u128) << diff;
        let b = o.m as u128;
        if a <= b {
            None
        } else {
            Some(Mag::from_parts_down(a - b, o.e))
        }
    }

    pub fn mul_up(self, o: Mag) -> Mag {
        Mag::from_parts_up(self.m as u128 * o.m as u128, self.e + o.e)
    }

    pub fn mul_down(self, o: Mag) -> Mag {
        Mag::from_parts_down(self.m as u128 * o.m as u128, self.e + o.e)
    }

    pub fn mul_u64_up(self, k: u64) -> Mag {
        self.mul_up(Mag::from_u64(k))
    }

    /// Upper bound of `self / o`; `None` when `o` is zero.
    pub fn div_up(self, o: Mag) -> Option<Mag> {
        if o.is_zero() {
            return None;
        }
        let n = (self.m as u128) << 64;
        let q = n / o.m as u128;
        let r = n % o.m as u128;
        let q = if r != 0 { q + 1 } else { q };
        Some(Mag::from_parts_up(q, self.e - 64 - o.e))
    }

    pub fn div_down(self, o: Mag) -> Option<Mag> {
        if o.is_zero() {
            return None;
        }
        let n = (self.m as u128) << 64;
        Some(Mag::from_parts_down(n / o.m as u128, self.e - 64 - o.e))
    }

    fn sqrt_dir(self, up: bool) -> Mag {
        if self.is_zero() {
            return self;
        }
        let (mut m, mut e) = (self.m as u128, self.e);
        if e.rem_euclid(2) != 0 {
            m <<= 1;
            e -= 1;
        }
        let n = m << 70;
        let mut r = n.isqrt();
        if up && r * r != n {
            r += 1;
        }
        Mag::normalize(r, (e - 70) / 2, up)
    }

    pub fn sqrt_up(self) -> Mag {
        self.sqrt_dir(true)
    }

    pub fn sqrt_down(self) -> Mag {
        self.sqrt_dir(false)
    }

    pub fn max(self, o: Mag) -> Mag {
        if self >= o {
            self
        } else {
            o
        }
    }

    /// `f64` upper bound (may be `+inf`).
    pub fn to_f64_up(self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let v = ldexp(self.m as f64, self.e);
        if (-1000..=960).contains(&self.e) {
            v
        } else {
            v.next_up()
        }
    }

    /// `f64` lower bound.
    pub fn to_f64_down(self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let v = ldexp(self.m as f64, self.e);
        if (-1000..=960).contains(&self.e) {
            v
        } else if v.is_infinite() {
            f64::MAX
        } else {
            v.next_down().max(0.0)
        }
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.e.cmp(&o.e).then(self.m.cmp(&o.m)),
        }
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3e}", self.to_f64_up())
    }
}

/// Exact `(mantissa, exponent)` of a finite positive `f64`.
pub(crate) fn decode_f64(x: f64) -> (u64, i64) {
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    }
}

/// `x * 2^e` computed in safe steps.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}
