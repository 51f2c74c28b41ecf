//! Closed-form a-priori bounds on floating-point error in `f_i^c(0)` when
//! every operation is rounded to `N` bits, `r = 2^(1-N)`.

use serde::Serialize;

use super::ShadowingError;
use crate::ball::{Ball, BigFloat, Precision};

/// Smallest precision for which the model applies (`r ≤ 10⁻¹⁰`).
pub const MIN_BITS: u32 = 34;

#[derive(Clone, Debug, Serialize)]
pub struct ErrorModel {
    pub bits: u32,
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    pub disc: f64,
    pub root: f64,
    pub sigma: f64,
    pub f: f64,
    pub fc: f64,
    /// The published summary bound `4·10⁶ r`.
    pub summary: f64,
    #[serde(skip)]
    fc_ball: Ball,
}

impl ErrorModel {
    /// `δ_{f^c}` as a ball; exact up to the rounding of the constants.
    pub fn fc_ball(&self) -> &Ball {
        &self.fc_ball
    }
}

pub fn error_model(bits: u32) -> Result<ErrorModel, ShadowingError> {
    if bits < MIN_BITS {
        return Err(ShadowingError::InsufficientPrecision { bits, min: MIN_BITS });
    }
    let prec = Precision::new(128)?;
    let r = Ball::from_bigfloat(&BigFloat::from_parts(1.into(), 1 - bits as i64), prec);
    let k = |c: i64| r.mul_i64(c);
    let alpha = k(2000);
    let beta = k(2000);
    let disc = k(1_000_000);
    let root = k(1_600_000);
    let sigma = alpha.mul_i64(10).add(&k(14));
    let f = sigma.mul_i64(1 + 10 + 100);
    let fc = f.add(&root.mul_i64(9000));
    let summary = k(4_000_000);
    let up = |b: &Ball| b.upper_f64();
    Ok(ErrorModel {
        bits,
        r: up(&r),
        alpha: up(&alpha),
        beta: up(&beta),
        disc: up(&disc),
        root: up(&root),
        sigma: up(&sigma),
        f: up(&f),
        fc: up(&fc),
        summary: up(&summary),
        fc_ball: fc,
    })
}
