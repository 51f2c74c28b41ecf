//! The hyperbolicity constant `C` of the linearized pseudo-orbit.
//!
//! `L` acts on `(R²)^n` by the Jacobians `L_i = (Df_i^c)_0`. Two bounds are
//! produced. The first follows the published route: a verified inverse of
//! `L − I`, the Frobenius norm of that inverse, and a perturbation term for
//! the entry radii; it bounds `1/σ_min(L − I)`. The second bounds the
//! operator norm for the block-sup norm `‖w‖₀ = max_i ‖w_i‖₂`, which is the
//! norm the contraction argument needs, by the largest block-row sum of
//! exact 2×2 spectral norms.

use crate::ball::{Ball, BallMatrix, BigFloat, Precision};
use crate::surface::PseudoOrbit;

use super::ShadowingError;

#[derive(Clone, Debug)]
pub struct HyperbolicityData {
    pub jacobians: Vec<BallMatrix>,
    /// `L` with `L_i` in block `(i, i+1)` and `L_{n-1}` in block `(n-1, 0)`.
    pub l: BallMatrix,
    pub inverse: BallMatrix,
    /// `‖(L − I)⁻¹‖_F`.
    pub frobenius: Ball,
    /// Largest entry radius of `L`.
    pub entry_radius: f64,
    /// Frobenius bound plus the perturbation term: an upper bound of `1/σ_min(L − I)`.
    pub c_bound: Ball,
    /// `1/c_bound`.
    pub sigma_min_lower: Ball,
    /// `1/√(‖X‖₁‖X‖_∞)` with `X = (L − I)⁻¹`.
    pub sigma_min_lower_holder: Ball,
    /// `‖v‖/‖Xv‖` for a power-iteration vector `v`; no lower bound may exceed it.
    pub sigma_min_upper: f64,
    /// Block-sup operator norm bound of `(L − I)⁻¹` for `l`.
    pub block_sup: Ball,
    /// The same for [`lemma_layout`], where `(Lw)_{i+1} = L_i w_i`.
    pub block_sup_lemma: Ball,
    /// `det(L_{n-1} ⋯ L_0)`.
    pub det_product: Ball,
}

impl HyperbolicityData {
    pub fn from_jacobians(ls: &[BallMatrix]) -> Result<HyperbolicityData, ShadowingError> {
        let n = ls.len();
        let prec = ls[0].get(0, 0).prec();
        let l = displayed_layout(ls);
        let shifted = l.sub(&BallMatrix::identity(2 * n, prec));
        let inverse = shifted.verified_inverse().map_err(ShadowingError::Singular)?;
        let frobenius = inverse.frobenius()?;

        let radius = l.max_radius();
        let e = Ball::from_i64(4 * n as i64, prec)
            .sqrt()?
            .mul(&Ball::from_bigfloat(&BigFloat::from_mag(radius), prec));
        let gap = frobenius.recip()?.sub(&e);
        if !gap.is_positive() {
            return Err(ShadowingError::Singular(crate::ball::BallError::Singular(
                "perturbation exceeds the smallest singular value",
            )));
        }
        let c_bound = frobenius.add(&e.div(&gap)?);
        let sigma_min_lower = c_bound.recip()?;

        let one_norm = Ball::from_f64(inverse.transpose().norm_inf_upper().to_f64_up(), prec)?;
        let inf_norm = Ball::from_f64(inverse.norm_inf_upper().to_f64_up(), prec)?;
        let sigma_min_lower_holder = one_norm.mul(&inf_norm).sqrt()?.recip()?;
        let sigma_min_upper = power_estimate(&inverse, prec)?;

        let block_sup = block_sup_norm_upper(&inverse)?;
        let lemma = lemma_layout(ls).sub(&BallMatrix::identity(2 * n, prec));
        let block_sup_lemma =
            block_sup_norm_upper(&lemma.verified_inverse().map_err(ShadowingError::Singular)?)?;

        let product = ls.iter().fold(BallMatrix::identity(2, prec), |acc, li| li.mul(&acc));
        let det_product = product
            .get(0, 0)
            .mul(product.get(1, 1))
            .sub(&product.get(0, 1).mul(product.get(1, 0)));

        Ok(HyperbolicityData {
            jacobians: ls.to_vec(),
            l,
            inverse,
            frobenius,
            entry_radius: radius.to_f64_up(),
            c_bound,
            sigma_min_lower,
            sigma_min_lower_holder,
            sigma_min_upper,
            block_sup,
            block_sup_lemma,
            det_product,
        })
    }

    /// Both lower bounds of `σ_min` lie below an attained upper estimate.
    pub fn sigma_bounds_consistent(&self) -> bool {
        self.sigma_min_lower.upper_f64() <= self.sigma_min_upper
            && self.sigma_min_lower_holder.upper_f64() <= self.sigma_min_upper
    }
}

pub fn hyperbolicity(orbit: &PseudoOrbit) -> Result<HyperbolicityData, ShadowingError> {
    HyperbolicityData::from_jacobians(&orbit.jacobians()?)
}

fn place(ls: &[BallMatrix], block: impl Fn(usize) -> (usize, usize)) -> BallMatrix {
    let n = ls.len();
    let prec = ls[0].get(0, 0).prec();
    let mut l = BallMatrix::zeros(2 * n, 2 * n, prec);
    for (i, li) in ls.iter().enumerate() {
        let (r, c) = block(i);
        for a in 0..2 {
            for b in 0..2 {
                l.set(2 * r + a, 2 * c + b, li.get(a, b).clone());
            }
        }
    }
    l
}

fn displayed_layout(ls: &[BallMatrix]) -> BallMatrix {
    let n = ls.len();
    place(ls, |i| (i, (i + 1) % n))
}

/// `L` with `L_i` in block `(i+1, i)`: the linearization `(Lw)_{i+1} = L_i w_i`.
pub fn lemma_layout(ls: &[BallMatrix]) -> BallMatrix {
    let n = ls.len();
    place(ls, |i| ((i + 1) % n, i))
}

/// `σ_max` of a 2×2 ball matrix: `√((F² + √(F⁴ − 4 det²))/2)`.
fn spectral_2x2(a: &Ball, b: &Ball, c: &Ball, d: &Ball) -> Result<Ball, ShadowingError> {
    let f2 = a.sqr().add(&b.sqr()).add(&c.sqr()).add(&d.sqr());
    let det = a.mul(d).sub(&b.mul(c));
    let disc = f2.sqr().sub(&det.sqr().mul_i64(4)).sqrt_nonneg()?;
    Ok(f2.add(&disc).mul_pow2(-1).sqrt_nonneg()?)
}

/// Upper bound of the operator norm of `x` for the block-sup norm on `(R²)^n`.
pub fn block_sup_norm_upper(x: &BallMatrix) -> Result<Ball, ShadowingError> {
    let n = x.rows() / 2;
    let prec = x.get(0, 0).prec();
    let mut best = Ball::zero(prec);
    for i in 0..n {
        let mut row = Ball::zero(prec);
        for j in 0..n {
            let g = |a: usize, b: usize| x.get(2 * i + a, 2 * j + b);
            row = row.add(&spectral_2x2(g(0, 0), g(0, 1), g(1, 0), g(1, 1))?);
        }
        best = best.max(&row);
    }
    Ok(best)
}

/// Upper estimate of `σ_min(X⁻¹) = 1/‖X‖₂` from a power-iteration vector.
fn power_estimate(x: &BallMatrix, prec: Precision) -> Result<f64, ShadowingError> {
    let n = x.rows();
    let m: Vec<f64> = x.entries().iter().map(Ball::mid_f64).collect();
    let mut v: Vec<f64> = (0..n).map(|k| 1.0 + 0.1 * k as f64).collect();
    for _ in 0..500 {
        let xv: Vec<f64> = (0..n).map(|r| (0..n).map(|c| m[r * n + c] * v[c]).sum()).collect();
        let w: Vec<f64> = (0..n).map(|c| (0..n).map(|r| m[r * n + c] * xv[r]).sum()).collect();
        let norm = w.iter().map(|t| t * t).sum::<f64>().sqrt();
        v = w.iter().map(|t| t / norm).collect();
    }
    let vb: Vec<Ball> = v.iter().map(|&t| Ball::from_f64(t, prec)).collect::<Result<_, _>>()?;
    let xv: Vec<Ball> = (0..n)
        .map(|r| (0..n).fold(Ball::zero(prec), |acc, c| acc.add(&x.get(r, c).mul(&vb[c]))))
        .collect();
    let ratio = crate::ball::norm2(&vb)?.div(&crate::ball::norm2(&xv)?)?;
    Ok(ratio.upper_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(128).unwrap()
    }

    #[test]
    fn single_block_doubling() {
        let l0 = BallMatrix::from_fn(2, 2, |i, j| Ball::from_i64(2 * (i == j) as i64, p()));
        let h = HyperbolicityData::from_jacobians(&[l0]).unwrap();
        assert!(h.block_sup.contains(&BigFloat::from_i64(1)));
        assert!(h.block_sup_lemma.contains(&BigFloat::from_i64(1)));
        assert!(h.c_bound.lower_f64() >= 1.0 - 1e-30);
        assert!(h.det_product.contains(&BigFloat::from_i64(4)));
        assert!(h.sigma_bounds_consistent());
    }

    #[test]
    fn spectral_norm_of_known_matrix() {
        // [[3, 0], [4, 5]] has singular values 3·√5 and √5
        let b = |v: i64| Ball::from_i64(v, p());
        let s = spectral_2x2(&b(3), &b(0), &b(4), &b(5)).unwrap();
        assert!((s.mid_f64() - 3.0 * 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rotation_is_not_hyperbolic() {
        // L − I singular when L₀ = I
        let id = BallMatrix::identity(2, p());
        assert!(matches!(
            HyperbolicityData::from_jacobians(&[id]),
            Err(ShadowingError::Singular(_))
        ));
    }
}
