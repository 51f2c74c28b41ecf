//! Derivative bounds feeding the shadowing hypotheses.
//!
//! The discriminant `𝒟` and its partials are evaluated at the chart base
//! points and inflated to the `ε`-balls with a global bound on the third
//! partials; the branch root `p_±` and the transition maps get their own
//! bounds from those. Every quantity is also enclosed directly over the
//! `ε`-boxes, which is tighter and independent of the inflation argument.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use super::{decimal, CertifyConfig, ShadowingError};
use crate::ball::{Ball, BigFloat, Precision, Scalar};
use crate::surface::jet::Taylor2;
use crate::surface::{branch_root, discriminant, PseudoOrbit};

/// `(∂xxx, ∂xxy, ∂xyy, ∂yyy)` of the discriminant.
pub fn third_partials<T: Scalar>(a: &T, x: &T, y: &T) -> [T; 4] {
    let c = |v: i64| x.int(v);
    let u = c(1) + x.square();
    let v = c(1) + y.square();
    let a2 = a.square();
    let uv = u.clone() * v.clone();
    let lin = a2 * c(4) + c(32) - c(64) * uv;
    [
        c(-96) * x.clone() * v.square(),
        y.clone() * (lin.clone() - c(128) * x.square() * v),
        x.clone() * (lin - c(128) * y.square() * u.clone()),
        c(-96) * y.clone() * u.square(),
    ]
}

/// Certified enclosure `[lower, upper]` of a supremum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupEnclosure {
    pub lower: f64,
    pub upper: f64,
    pub boxes: usize,
}

impl SupEnclosure {
    pub fn ball(&self, prec: Precision) -> Ball {
        interval_ball(self.lower, self.upper, prec)
    }
}

/// Ball holding exactly the interval `[lo, hi]` of two doubles.
fn interval_ball(lo: f64, hi: f64, prec: Precision) -> Ball {
    let half = BigFloat::from_parts(1.into(), -1);
    let lo = BigFloat::from_f64(lo).expect("finite bound");
    let hi = BigFloat::from_f64(hi).expect("finite bound");
    let mid = lo.add_exact(&hi).mul_exact(&half);
    let rad = hi.sub_exact(&lo).mul_exact(&half).mag_upper();
    Ball::with_radius(mid, rad, prec).expect("bounds in range")
}

#[derive(Clone, Copy, Debug)]
struct Rect {
    x: (f64, f64),
    y: (f64, f64),
}

impl Rect {
    fn balls(&self, prec: Precision) -> (Ball, Ball) {
        (interval_ball(self.x.0, self.x.1, prec), interval_ball(self.y.0, self.y.1, prec))
    }

    fn centre(&self, prec: Precision) -> (Ball, Ball) {
        let m = |(a, b): (f64, f64)| Ball::from_f64(0.5 * (a + b), prec).expect("finite");
        (m(self.x), m(self.y))
    }

    fn split(&self) -> [Rect; 2] {
        if self.x.1 - self.x.0 >= self.y.1 - self.y.0 {
            let m = 0.5 * (self.x.0 + self.x.1);
            [Rect { x: (self.x.0, m), ..*self }, Rect { x: (m, self.x.1), ..*self }]
        } else {
            let m = 0.5 * (self.y.0 + self.y.1);
            [Rect { y: (self.y.0, m), ..*self }, Rect { y: (m, self.y.1), ..*self }]
        }
    }
}

struct Queued {
    upper: f64,
    rect: Rect,
}

impl PartialEq for Queued {
    fn eq(&self, o: &Self) -> bool {
        self.upper.total_cmp(&o.upper) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Queued {
    fn cmp(&self, o: &Self) -> Ordering {
        self.upper.total_cmp(&o.upper)
    }
}

const SEARCH_PREC: u32 = 64;
/// `{𝒟 ≥ 0}` lies in `(1+x²)(1+y²) ≤ (A²+8)/4`, so `|x|, |y| ≤ 6` covers `A ≤ 13`.
const SEARCH_HALF_WIDTH: f64 = 6.0;

/// Branch and bound for `sup g` over the real locus `{𝒟 ≥ 0}`.
///
/// Boxes are processed best-first by their interval upper bound; a box is
/// dropped when `𝒟` is certainly negative on it or when its bound falls
/// below a certified value of `g` at a feasible centre point.
pub fn maximize_on_real_locus<G>(
    a: &Ball,
    g: G,
    tol: f64,
    budget: usize,
) -> Result<SupEnclosure, ShadowingError>
where
    G: Fn(&Ball, &Ball) -> Ball,
{
    let prec = Precision::new(SEARCH_PREC)?;
    let a = a.set_prec(prec);
    if a.mag_upper().to_f64_up() > 13.0 {
        return Err(ShadowingError::Precondition("search box assumes |A| <= 13".into()));
    }
    let w = SEARCH_HALF_WIDTH;
    let mut heap = BinaryHeap::new();
    heap.push(Queued {
        upper: f64::INFINITY,
        rect: Rect { x: (-w, w), y: (-w, w) },
    });
    let mut lower = f64::NEG_INFINITY;
    let mut boxes = 0;
    while let Some(top) = heap.pop() {
        if top.upper - lower <= tol {
            return Ok(SupEnclosure { lower, upper: top.upper, boxes });
        }
        boxes += 1;
        if boxes > budget {
            return Err(ShadowingError::Budget { boxes: budget, gap: top.upper - lower });
        }
        for child in top.rect.split() {
            let (x, y) = child.balls(prec);
            if discriminant(&a, &x, &y).upper_f64() < 0.0 {
                continue;
            }
            let upper = g(&x, &y).upper_f64();
            if upper < lower {
                continue;
            }
            let (cx, cy) = child.centre(prec);
            if discriminant(&a, &cx, &cy).lower_f64() >= 0.0 {
                lower = lower.max(g(&cx, &cy).lower_f64());
            }
            heap.push(Queued { upper, rect: child });
        }
    }
    Err(ShadowingError::Precondition("the real locus is empty".into()))
}

/// Certified enclosure of `max |x|` over the real locus.
pub fn coordinate_range_bound(a: &Ball, tol: f64) -> Result<SupEnclosure, ShadowingError> {
    if !(tol > 0.0) {
        return Err(ShadowingError::Precondition("tolerance must be positive".into()));
    }
    maximize_on_real_locus(a, |x, _| x.abs(), tol, 1 << 20)
}

fn third_partial_sup(a: &Ball, tol: f64) -> Result<SupEnclosure, ShadowingError> {
    maximize_on_real_locus(
        a,
        |x, y| {
            let a = a.set_prec(x.prec());
            let [p, q, r, s] = third_partials(&a, x, y);
            p.abs().max(&q.abs()).max(&r.abs()).max(&s.abs())
        },
        tol,
        1 << 21,
    )
}

fn ball_min(a: &Ball, b: &Ball) -> Ball {
    a.neg().max(&b.neg()).neg()
}

fn max_abs<'a>(it: impl IntoIterator<Item = &'a Ball>, prec: Precision) -> Ball {
    it.into_iter().fold(Ball::zero(prec), |m, b| m.max(&b.abs()))
}

/// Bounds on the derivatives of `f` over the real locus, with `m = max(|A|, 1)`:
/// `‖Df‖ ≤ 9m³` and `‖D²f‖ ≤ 81(2m²)³`.
pub fn ambient_derivative_bounds(a: &Ball) -> Result<(Ball, Ball), ShadowingError> {
    if a.contains_zero() {
        return Err(ShadowingError::Precondition("A must be nonzero".into()));
    }
    let m = a.abs().max(&Ball::from_i64(1, a.prec()));
    let df = m.sqr().mul(&m).mul_i64(9);
    let s = m.sqr().mul_i64(2);
    let d2f = s.sqr().mul(&s).mul_i64(81);
    Ok((df, d2f))
}

/// `𝒟` with its gradient and Hessian at one base point.
#[derive(Clone, Debug)]
pub struct BaseDerivatives {
    pub value: Ball,
    pub grad: [Ball; 2],
    /// `(∂11, ∂22, ∂12)`.
    pub hess: [Ball; 3],
}

impl BaseDerivatives {
    fn at(a: &Ball, x: &Ball, y: &Ball) -> BaseDerivatives {
        let v = Taylor2::variables(&[x.clone(), y.clone()]);
        let d = discriminant(&v[0].embed(a), &v[0], &v[1]);
        BaseDerivatives {
            value: d.value().clone(),
            grad: [d.grad(0).clone(), d.grad(1).clone()],
            hess: [d.hess(0, 0).clone(), d.hess(1, 1).clone(), d.hess(0, 1).clone()],
        }
    }
}

/// Bounds on `𝒟` and its first two derivatives over a neighbourhood.
#[derive(Clone, Debug)]
pub struct Inflated {
    /// Upper bound of `|𝒟|`.
    pub value: Ball,
    /// Upper bound of `|∂𝒟|`.
    pub first: Ball,
    /// Upper bound of `|∂²𝒟|`.
    pub second: Ball,
    /// Lower bound of `𝒟`.
    pub lower: Ball,
}

#[derive(Clone, Debug)]
pub struct BoundLedger {
    pub rows: Vec<BaseDerivatives>,
    /// `max_i |𝒟(a_i, b_i)|`.
    pub k: Ball,
    /// `max_i ‖D𝒟(a_i, b_i)‖_∞`.
    pub r: Ball,
    /// `max_i ‖D²𝒟(a_i, b_i)‖_∞`.
    pub m: Ball,
    pub d_min: Ball,
    /// Supremum of the third partials over the real locus.
    pub third: SupEnclosure,
    pub eps: Ball,
    /// Mean-value inflation of `(K, R, M)` to the `ε`-balls.
    pub inflated: Inflated,
    /// Direct enclosure over the `ε`-boxes.
    pub direct: Inflated,
    pub domain_radius: Ball,
    /// Lower bound of `𝒟` over the `domain_radius`-boxes.
    pub domain_min: Ball,
}

impl BoundLedger {
    /// Mean-value inflation from the base points to balls of radius `eps`.
    pub fn inflate(k: &Ball, r: &Ball, m: &Ball, d_min: &Ball, third: &Ball, eps: &Ball) -> Inflated {
        let step = Ball::from_i64(2, eps.prec())
            .sqrt()
            .expect("sqrt 2")
            .mul(eps);
        let second = m.add(&step.mul(third));
        let first = r.add(&step.mul(&second));
        Inflated {
            value: k.add(&step.mul(&first)),
            lower: d_min.sub(&step.mul(&first)),
            first,
            second,
        }
    }
}

fn boxed(b: &Ball, radius: &Ball) -> Ball {
    b.inflate(radius.mag_upper())
}

pub fn discriminant_ledger(orbit: &PseudoOrbit, cfg: &CertifyConfig) -> Result<BoundLedger, ShadowingError> {
    let prec = orbit.prec();
    let a = &orbit.parameter;
    let rows: Vec<BaseDerivatives> = orbit
        .charts
        .iter()
        .map(|c| BaseDerivatives::at(a, &c.base[0], &c.base[1]))
        .collect();
    let k = max_abs(rows.iter().map(|r| &r.value), prec);
    let r = max_abs(rows.iter().flat_map(|r| &r.grad), prec);
    let m = max_abs(rows.iter().flat_map(|r| &r.hess), prec);
    let d_min = rows
        .iter()
        .map(|r| r.value.clone())
        .reduce(|x, y| ball_min(&x, &y))
        .expect("non-empty orbit");

    let domain_radius = decimal(cfg.domain_radius, prec);
    let mut domain_min: Option<Ball> = None;
    for (index, c) in orbit.charts.iter().enumerate() {
        let d = discriminant(a, &boxed(&c.base[0], &domain_radius), &boxed(&c.base[1], &domain_radius));
        if !d.is_positive() {
            return Err(ShadowingError::Positivity { index, lower: d.lower_f64() });
        }
        domain_min = Some(match domain_min {
            Some(m) => ball_min(&m, &d),
            None => d,
        });
    }

    let third = third_partial_sup(a, cfg.third_partial_tol)?;
    let eps = decimal(cfg.eps, prec);
    let inflated = BoundLedger::inflate(&k, &r, &m, &d_min, &Ball::from_f64(third.upper, prec)?, &eps);

    let boxes: Vec<BaseDerivatives> = orbit
        .charts
        .iter()
        .map(|c| BaseDerivatives::at(a, &boxed(&c.base[0], &eps), &boxed(&c.base[1], &eps)))
        .collect();
    let direct = Inflated {
        value: max_abs(boxes.iter().map(|r| &r.value), prec),
        first: max_abs(boxes.iter().flat_map(|r| &r.grad), prec),
        second: max_abs(boxes.iter().flat_map(|r| &r.hess), prec),
        lower: boxes
            .iter()
            .map(|r| r.value.clone())
            .reduce(|x, y| ball_min(&x, &y))
            .expect("non-empty orbit"),
    };

    Ok(BoundLedger {
        rows,
        k,
        r,
        m,
        d_min,
        third,
        eps,
        inflated,
        direct,
        domain_radius,
        domain_min: domain_min.expect("non-empty orbit"),
    })
}

/// Bounds on the first and second partials of the branch roots `p_±`.
#[derive(Clone, Debug)]
pub struct ChartBounds {
    /// Whether the configured `C₁`, `C₂` dominate the inflated bounds; when
    /// they do not, the inflated bounds themselves are used.
    pub declared_hold: bool,
    pub c1: Ball,
    pub c2: Ball,
    /// `5 + ½√C₁ + ¼C₂`.
    pub dp_formula: Ball,
    /// `10 + √C₁ + ¾C₂ + ⅛C₂²`.
    pub d2p_formula: Ball,
    /// Enclosures over the `ε`-boxes around the base points.
    pub dp_direct: Ball,
    pub d2p_direct: Ball,
}

impl ChartBounds {
    pub fn from_constants(c1: &Ball, c2: &Ball) -> Result<(Ball, Ball), ShadowingError> {
        let r1 = c1.sqrt()?;
        let dp = r1.mul_pow2(-1).add(&c2.mul_pow2(-2)).add_i64(5);
        let d2p = r1
            .add(&c2.mul_i64(3).mul_pow2(-2))
            .add(&c2.sqr().mul_pow2(-3))
            .add_i64(10);
        Ok((dp, d2p))
    }

    /// Tightest certified bound on `‖Dp_±‖_∞`.
    pub fn dp(&self) -> Ball {
        ball_min(&self.dp_formula, &self.dp_direct)
    }

    pub fn d2p(&self) -> Ball {
        ball_min(&self.d2p_formula, &self.d2p_direct)
    }
}

pub fn chart_derivative_bounds(
    orbit: &PseudoOrbit,
    ledger: &BoundLedger,
    cfg: &CertifyConfig,
) -> Result<ChartBounds, ShadowingError> {
    let prec = orbit.prec();
    let one = Ball::from_i64(1, prec);
    let c1 = decimal(cfg.c1, prec);
    let c2 = decimal(cfg.c2, prec);
    let inf = &ledger.inflated;
    if !one.certainly_lt(&inf.lower) {
        return Err(ShadowingError::Precondition(format!(
            "discriminant lower bound {} on the eps-balls is not above 1",
            inf.lower
        )));
    }
    let declared_hold = inf.value.certainly_lt(&c1) && inf.first.max(&inf.second).certainly_lt(&c2);
    let (c1, c2) = if declared_hold {
        (c1, c2)
    } else {
        (inf.value.clone(), inf.first.max(&inf.second))
    };
    let (dp_formula, d2p_formula) = ChartBounds::from_constants(&c1, &c2)?;

    let a = &orbit.parameter;
    let mut dp_direct = Ball::zero(prec);
    let mut d2p_direct = Ball::zero(prec);
    for c in &orbit.charts {
        let v = Taylor2::variables(&[boxed(&c.base[0], &ledger.eps), boxed(&c.base[1], &ledger.eps)]);
        let p = branch_root(&v[0].embed(a), c.branch, &v[0], &v[1])?;
        dp_direct = dp_direct.max(&max_abs([p.grad(0), p.grad(1)], prec));
        d2p_direct = d2p_direct.max(&max_abs([p.hess(0, 0), p.hess(1, 1), p.hess(0, 1)], prec));
    }
    Ok(ChartBounds {
        declared_hold,
        c1,
        c2,
        dp_formula,
        d2p_formula,
        dp_direct,
        d2p_direct,
    })
}

/// Bounds on `max_i ‖Df_i^c‖_{C¹(B_ε)}` by jet composition and directly.
#[derive(Clone, Debug)]
pub struct DerivativeChain {
    pub ambient_df: Ball,
    pub ambient_d2f: Ball,
    /// Entry bound of the jet of one involution, `2·max(A,1)²`.
    pub involution_jet: Ball,
    /// `3·9²·(2·max(A,1)²)³`: operator-norm bound of the jet of `f` as printed.
    pub ambient_jet: Ball,
    /// `max(‖D²p‖, 2‖Dp‖²)` from the chart formula bounds.
    pub chart_entry: Ball,
    /// `√5 · 3·10⁴`, checked against `chart_entry ≤ 3·10⁴`.
    pub chart_jet: Ball,
    /// `ambient_jet · 7·10⁴`.
    pub chain: Ball,
    /// The same chain with `√(mn)` norm conversions for `m × n` jet matrices.
    pub chain_sound: Ball,
    /// Enclosure of the jet entries of every `f_i^c` over the `ε`-box.
    pub direct: Ball,
}

impl DerivativeChain {
    /// Smallest rigorous bound.
    pub fn certified(&self) -> Ball {
        ball_min(&self.chain_sound, &self.direct)
    }
}

pub fn second_derivative_bound(
    orbit: &PseudoOrbit,
    ledger: &BoundLedger,
    charts: &ChartBounds,
) -> Result<DerivativeChain, ShadowingError> {
    let prec = orbit.prec();
    let a = &orbit.parameter;
    let (ambient_df, ambient_d2f) = ambient_derivative_bounds(a)?;
    let m = a.abs().max(&Ball::from_i64(1, prec));
    let involution_jet = m.sqr().mul_i64(2);
    let cube = involution_jet.sqr().mul(&involution_jet);
    let ambient_jet = cube.mul_i64(3 * 81);
    let ambient_jet_sound = cube.mul_i64(9 * 81);

    let chart_entry = charts.d2p_formula.max(&charts.dp_formula.sqr().mul_i64(2));
    let sqrt = |v: i64| Ball::from_i64(v, prec).sqrt().expect("positive");
    let chart_jet = sqrt(5).mul_i64(30_000);
    let chain = ambient_jet.mul_i64(70_000);
    let chart_entry_sound = charts.d2p().max(&charts.dp().sqr().mul_i64(2));
    let chain_sound = ambient_jet_sound.mul(&sqrt(45)).mul(&chart_entry_sound);

    let mut direct = Ball::zero(prec);
    let w = Ball::zero(prec).inflate(ledger.eps.mag_upper());
    for i in 0..orbit.period() {
        let j = orbit.transition_jet_at(i, &[w.clone(), w.clone()])?;
        for r in 0..5 {
            for c in 0..2 {
                direct = direct.max(&j.get(r, c).abs());
            }
        }
    }
    Ok(DerivativeChain {
        ambient_df,
        ambient_d2f,
        involution_jet,
        ambient_jet,
        chart_entry,
        chart_jet,
        chain,
        chain_sound,
        direct,
    })
}
