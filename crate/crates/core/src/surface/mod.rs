//! The real (2,2,2) surface `q_A = 0`, its involutions and the chart system
//! along a pseudo-orbit.
//!
//! `q_A(x, y, z) = (1 + x²)(1 + y²)(1 + z²) + A x y z - 2`. Each `σ_k` is the
//! deck involution of the double cover forgetting coordinate `k`, and
//! `f = σ_3 ∘ σ_2 ∘ σ_1`. All formulas are generic over [`Scalar`], so the
//! same code runs on balls, on `f64` and on Taylor numbers.

pub mod jet;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::{norm2, Ball, BallError, BallMatrix, Precision, Scalar};
use jet::{jacobian_from_jet, jet_at, Taylor2};

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error("orbit configuration: {0}")]
    Config(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "z")]
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// The two remaining coordinate indices, increasing.
    pub fn others(self) -> [usize; 2] {
        match self {
            Axis::X => [1, 2],
            Axis::Y => [0, 2],
            Axis::Z => [0, 1],
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        })
    }
}

pub fn q<T: Scalar>(a: &T, p: &[T; 3]) -> T {
    let one = a.int(1);
    let [x, y, z] = p;
    (one.clone() + x.square()) * (one.clone() + y.square()) * (one + z.square())
        + a.clone() * x.clone() * y.clone() * z.clone()
        - a.int(2)
}

/// The involution `σ_k` (`k` = axis), swapping the two roots in coordinate `k`.
pub fn sigma<T: Scalar>(a: &T, axis: Axis, p: &[T; 3]) -> Result<[T; 3], BallError> {
    let k = axis.index();
    let [i, j] = axis.others();
    let one = a.int(1);
    let den = (one.clone() + p[i].square()) * (one + p[j].square());
    let shift = (a.clone() * p[i].clone() * p[j].clone()).try_div(&den)?;
    let mut out = p.clone();
    out[k] = -p[k].clone() - shift;
    Ok(out)
}

/// `f = σ_3 ∘ σ_2 ∘ σ_1`.
pub fn f<T: Scalar>(a: &T, p: &[T; 3]) -> Result<[T; 3], BallError> {
    let p = sigma(a, Axis::X, p)?;
    let p = sigma(a, Axis::Y, &p)?;
    sigma(a, Axis::Z, &p)
}

/// `f⁻¹ = σ_1 ∘ σ_2 ∘ σ_3`.
pub fn f_inv<T: Scalar>(a: &T, p: &[T; 3]) -> Result<[T; 3], BallError> {
    let p = sigma(a, Axis::Z, p)?;
    let p = sigma(a, Axis::Y, &p)?;
    sigma(a, Axis::X, &p)
}

/// Reflection through the plane `x = -z`.
pub fn rho<T: Scalar>(p: &[T; 3]) -> [T; 3] {
    [-p[2].clone(), p[1].clone(), -p[0].clone()]
}

/// Discriminant of `q_A` as a quadratic in the remaining coordinate:
/// `A² x² y² + 8(1 + x²)(1 + y²) - 4(1 + x²)²(1 + y²)²`.
pub fn discriminant<T: Scalar>(a: &T, x: &T, y: &T) -> T {
    let one = a.int(1);
    let u = one.clone() + x.square();
    let v = one + y.square();
    let uv = u * v;
    a.square() * x.square() * y.square() + a.int(8) * uv.clone() - a.int(4) * uv.square()
}

/// Root `(-A x y ± √D) / (2(1 + x²)(1 + y²))`; a domain error where `D < 0`.
pub fn branch_root<T: Scalar>(a: &T, branch: Branch, x: &T, y: &T) -> Result<T, BallError> {
    let d = discriminant(a, x, y);
    let s = d.try_sqrt()?;
    let s = match branch {
        Branch::Plus => s,
        Branch::Minus => -s,
    };
    let one = a.int(1);
    let den = a.int(2) * (one.clone() + x.square()) * (one + y.square());
    (-(a.clone() * x.clone() * y.clone()) + s).try_div(&den)
}

/// `Ψ_k^±(u, v)`: `(u, v)` in the coordinates other than `k`, the chosen root in `k`.
pub fn psi<T: Scalar>(a: &T, axis: Axis, branch: Branch, u: &T, v: &T) -> Result<[T; 3], BallError> {
    let w = branch_root(a, branch, u, v)?;
    Ok(match axis {
        Axis::X => [w, u.clone(), v.clone()],
        Axis::Y => [u.clone(), w, v.clone()],
        Axis::Z => [u.clone(), v.clone(), w],
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChartSpec {
    pub axis: Axis,
    pub branch: Branch,
    pub a: String,
    pub b: String,
}

/// Pseudo-orbit configuration as stored on disk; decimal strings keep the
/// literals exact until they are enclosed at a chosen precision.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitConfig {
    pub parameter: String,
    pub charts: Vec<ChartSpec>,
}

const DEFAULT_ORBIT: &str = include_str!("../../data/orbit_a10.json");

impl OrbitConfig {
    /// The period-10 pseudo-orbit for `A = 10`.
    pub fn default_orbit() -> OrbitConfig {
        serde_json::from_str(DEFAULT_ORBIT).expect("embedded orbit is valid JSON")
    }

    pub fn from_json(s: &str) -> Result<OrbitConfig, SurfaceError> {
        let cfg: OrbitConfig =
            serde_json::from_str(s).map_err(|e| SurfaceError::Config(e.to_string()))?;
        if cfg.charts.is_empty() {
            return Err(SurfaceError::Config("orbit has no charts".into()));
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Chart `φ(ζ, γ) = Ψ_k^±(ζ + a, γ + b)` centred at a pseudo-orbit point.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub axis: Axis,
    pub branch: Branch,
    pub base: [Ball; 2],
}

impl Chart {
    pub fn eval<T: Scalar>(&self, a: &T, w: &[T; 2]) -> Result<[T; 3], BallError> {
        let u = w[0].clone() + w[0].embed(&self.base[0]);
        let v = w[1].clone() + w[1].embed(&self.base[1]);
        psi(a, self.axis, self.branch, &u, &v)
    }

    /// `φ⁻¹`: drop coordinate `k` and subtract the base point.
    pub fn inverse<T: Scalar>(&self, p: &[T; 3]) -> [T; 2] {
        let [i, j] = self.axis.others();
        [
            p[i].clone() - p[i].embed(&self.base[0]),
            p[j].clone() - p[j].embed(&self.base[1]),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct PseudoOrbit {
    pub parameter: Ball,
    pub charts: Vec<Chart>,
}

impl PseudoOrbit {
    pub fn from_config(cfg: &OrbitConfig, prec: Precision) -> Result<PseudoOrbit, SurfaceError> {
        let parameter = Ball::from_decimal(&cfg.parameter, prec)?;
        let charts = cfg
            .charts
            .iter()
            .map(|c| {
                Ok(Chart {
                    axis: c.axis,
                    branch: c.branch,
                    base: [Ball::from_decimal(&c.a, prec)?, Ball::from_decimal(&c.b, prec)?],
                })
            })
            .collect::<Result<Vec<_>, BallError>>()?;
        if charts.is_empty() {
            return Err(SurfaceError::Config("orbit has no charts".into()));
        }
        Ok(PseudoOrbit { parameter, charts })
    }

    pub fn default_orbit(prec: Precision) -> PseudoOrbit {
        PseudoOrbit::from_config(&OrbitConfig::default_orbit(), prec).expect("embedded orbit parses")
    }

    pub fn period(&self) -> usize {
        self.charts.len()
    }

    pub fn prec(&self) -> Precision {
        self.parameter.prec()
    }

    fn next(&self, i: usize) -> usize {
        (i + 1) % self.period()
    }

    /// The pseudo-orbit point `x_i = φ_i(0)`.
    pub fn point(&self, i: usize) -> Result<[Ball; 3], BallError> {
        let z = Ball::zero(self.prec());
        self.charts[i].eval(&self.parameter, &[z.clone(), z])
    }

    /// `f_i^c = φ_{i+1}⁻¹ ∘ f ∘ φ_i`.
    pub fn transition<T: Scalar>(&self, i: usize, w: &[T; 2]) -> Result<[T; 2], BallError> {
        let a = w[0].embed(&self.parameter);
        let p = self.charts[i].eval(&a, w)?;
        let q = f(&a, &p)?;
        Ok(self.charts[self.next(i)].inverse(&q))
    }

    /// Enclosure of `‖f_i^c(0)‖₂`.
    pub fn residual(&self, i: usize) -> Result<Ball, BallError> {
        let z = Ball::zero(self.prec());
        let r = self.transition(i, &[z.clone(), z])?;
        norm2(&r)
    }

    pub fn residuals(&self) -> Result<Vec<Ball>, BallError> {
        (0..self.period()).map(|i| self.residual(i)).collect()
    }

    /// 5×5 jet matrix of `f_i^c` at a chart point, by direct Taylor evaluation.
    pub fn transition_jet_at(&self, i: usize, w: &[Ball; 2]) -> Result<BallMatrix, BallError> {
        let (_, j) = jet_at(w, |v| {
            let out = self.transition(i, &[v[0].clone(), v[1].clone()])?;
            Ok(out.to_vec())
        })?;
        Ok(j)
    }

    pub fn transition_jet(&self, i: usize) -> Result<BallMatrix, BallError> {
        let z = Ball::zero(self.prec());
        self.transition_jet_at(i, &[z.clone(), z])
    }

    /// The same jet assembled from the jets of the pieces:
    /// `J(f_i^c) = J(φ_i) · J(σ_1) · J(σ_2) · J(σ_3) · J(φ_{i+1}⁻¹)`.
    pub fn transition_jet_composed(&self, i: usize) -> Result<BallMatrix, BallError> {
        let prec = self.prec();
        let a = &self.parameter;
        let chart = &self.charts[i];
        let z = Ball::zero(prec);
        let (p0, j_chart) = jet_at(&[z.clone(), z], |v| {
            let a = v[0].embed(a);
            Ok(chart.eval(&a, &[v[0].clone(), v[1].clone()])?.to_vec())
        })?;
        let mut point = p0;
        let mut acc = j_chart;
        for axis in Axis::ALL {
            let (next, j) = jet_at(&point, |v| {
                let a = v[0].embed(a);
                Ok(sigma(&a, axis, &[v[0].clone(), v[1].clone(), v[2].clone()])?.to_vec())
            })?;
            acc = acc.mul(&j);
            point = next;
        }
        let target = &self.charts[self.next(i)];
        let (_, j_proj) = jet_at(&point, |v: &[Taylor2]| {
            Ok(target.inverse(&[v[0].clone(), v[1].clone(), v[2].clone()]).to_vec())
        })?;
        Ok(acc.mul(&j_proj))
    }

    /// `L_i = (D f_i^c)_0` as a 2×2 matrix.
    pub fn jacobian(&self, i: usize) -> Result<BallMatrix, BallError> {
        Ok(jacobian_from_jet(&self.transition_jet(i)?, 2, 2))
    }

    pub fn jacobians(&self) -> Result<Vec<BallMatrix>, BallError> {
        (0..self.period()).map(|i| self.jacobian(i)).collect()
    }

    /// Newton refinement of the pseudo-orbit: solve `f_i^c(w_i) = w_{i+1}`
    /// and recentre every chart at `w_i`. Chart axes and branches are kept.
    /// The refined base points are exact binary numbers.
    pub fn refine(&self, steps: usize) -> Result<PseudoOrbit, BallError> {
        let n = self.period();
        let prec = self.prec();
        let mut orbit = self.clone();
        for chart in &mut orbit.charts {
            chart.base = [chart.base[0].midpoint_ball(), chart.base[1].midpoint_ball()];
        }
        orbit.parameter = orbit.parameter.midpoint_ball();
        for _ in 0..steps {
            let z = Ball::zero(prec);
            let mut rhs = Vec::with_capacity(2 * n);
            let mut jac = BallMatrix::zeros(2 * n, 2 * n, prec);
            for i in 0..n {
                let j = (i + 1) % n;
                let r = orbit.transition(i, &[z.clone(), z.clone()])?;
                let l = orbit.jacobian(i)?;
                for row in 0..2 {
                    for col in 0..2 {
                        jac.set(2 * j + row, 2 * i + col, l.get(row, col).midpoint_ball());
                    }
                    jac.set(2 * j + row, 2 * j + row, Ball::from_i64(-1, prec));
                }
                rhs.push((j, r));
            }
            let inv = jac.midpoint().verified_inverse()?;
            let mut b = vec![z.clone(); 2 * n];
            for (j, r) in rhs {
                b[2 * j] = r[0].midpoint_ball().neg();
                b[2 * j + 1] = r[1].midpoint_ball().neg();
            }
            for (i, chart) in orbit.charts.iter_mut().enumerate() {
                for k in 0..2 {
                    let step = (0..2 * n).fold(z.clone(), |acc, c| {
                        &acc + &inv.get(2 * i + k, c).midpoint_ball().mul(&b[c])
                    });
                    chart.base[k] = chart.base[k].add(&step).midpoint_ball();
                }
            }
        }
        Ok(orbit)
    }

    /// Base points `(a_i, b_i)` as decimal strings with `digits` significant digits.
    pub fn to_config(&self, digits: usize) -> OrbitConfig {
        let dec = |b: &Ball| b.mid().to_decimal(digits);
        OrbitConfig {
            parameter: dec(&self.parameter),
            charts: self
                .charts
                .iter()
                .map(|c| ChartSpec {
                    axis: c.axis,
                    branch: c.branch,
                    a: dec(&c.base[0]),
                    b: dec(&c.base[1]),
                })
                .collect(),
        }
    }
}

/// `‖ρ(f(p)) - f⁻¹(ρ(p))‖₂`, which vanishes on the surface.
pub fn conjugation_defect(a: &Ball, p: &[Ball; 3]) -> Result<Ball, BallError> {
    let lhs = rho(&f(a, p)?);
    let rhs = f_inv(a, &rho(p))?;
    let diff: Vec<Ball> = lhs.iter().zip(&rhs).map(|(l, r)| l.sub(r)).collect();
    norm2(&diff)
}
