//! Certification of a periodic orbit near a pseudo-orbit.
//!
//! The quantitative shadowing lemma turns three checkable inequalities into
//! the existence of a true periodic point: the residuals `‖f_i^c(0)‖` are
//! below `δ`, `δ` is below a threshold built from the hyperbolicity constant
//! `C` and a bound on second derivatives, and the domains of the transition
//! maps contain a ball of radius `12Cδ`. This module computes every
//! ingredient with ball arithmetic and records the outcome as a
//! [`ShadowingCertificate`] that can be re-checked from its JSON form.

mod bounds;
mod certificate;
mod errmodel;
mod hyperbolic;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::{Ball, BallError, Precision};

pub use bounds::{
    ambient_derivative_bounds, chart_derivative_bounds, coordinate_range_bound,
    discriminant_ledger, maximize_on_real_locus, second_derivative_bound, third_partials,
    BaseDerivatives, BoundLedger, ChartBounds, DerivativeChain, Inflated, SupEnclosure,
};
pub use certificate::{
    certify, recheck, BallRecord, Certification, HypothesisCheck, HypothesisSet, RecheckReport,
    ShadowingCertificate,
};
pub use errmodel::{error_model, ErrorModel, MIN_BITS};
pub use hyperbolic::{block_sup_norm_upper, hyperbolicity, lemma_layout, HyperbolicityData};

#[derive(Debug, Error)]
pub enum ShadowingError {
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error("discriminant not certified positive near base point {index} (lower bound {lower:e})")]
    Positivity { index: usize, lower: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("L - I is not certifiably invertible: {0}")]
    Singular(BallError),
    #[error("{check} fails: {detail}")]
    CertificationFailure { check: String, detail: String },
    #[error("precision of {bits} bits is below the minimum of {min}")]
    InsufficientPrecision { bits: u32, min: u32 },
    #[error("branch and bound exhausted its budget of {boxes} boxes (gap {gap:e})")]
    Budget { boxes: usize, gap: f64 },
}

/// Numerical constants of a certification run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CertifyConfig {
    /// Radius of the chart balls on which derivatives are bounded.
    pub eps: f64,
    /// Radius of the ball that must lie in every transition domain.
    pub eps_prime: f64,
    /// Residual tolerance.
    pub delta: f64,
    /// Declared bound for the hyperbolicity constant.
    pub c_declared: f64,
    /// Declared bound for `‖Df_i^c‖` in `C¹` on the `eps`-balls.
    pub second_deriv_declared: f64,
    /// Radius of the neighbourhood of each base point on which the chart is used.
    pub domain_radius: f64,
    /// Declared bounds `C₁ ≥ 𝒟` and `C₂ ≥ |∂𝒟|, |∂²𝒟|` near the base points.
    pub c1: f64,
    pub c2: f64,
    /// Target for the localization radius `6Cδ`.
    pub localization_target: f64,
    /// Absolute tolerance of the third-partial branch and bound.
    pub third_partial_tol: f64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            eps: 1e-5,
            eps_prime: 1e-18,
            delta: 1e-29,
            c_declared: 21.0,
            second_deriv_declared: 1.4e14,
            domain_radius: 1e-3,
            c1: 115.0,
            c2: 442.0,
            localization_target: 1e-26,
            third_partial_tol: 2.0,
        }
    }
}

/// The decimal value written by `{:e}` for `x`, enclosed at `prec`.
///
/// Configuration values such as `1e-29` are meant as decimals, not as the
/// nearest binary double.
pub(crate) fn decimal(x: f64, prec: Precision) -> Ball {
    Ball::from_decimal(&format!("{x:e}"), prec).expect("finite configuration value")
}
