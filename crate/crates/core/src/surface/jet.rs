//! Second-order jets.
//!
//! [`Taylor2`] carries a value with its gradient and Hessian with respect to
//! `n` input variables; pushing Taylor numbers through a formula yields all
//! partials up to order two. [`jet_matrix`] packs those partials into the
//! matrix form in which jets compose by plain matrix multiplication:
//! `J(F ∘ G) = J(G) · J(F)`.
//!
//! Monomial basis for `n` variables: the `n` linear terms, then the squares
//! `x_i^2`, then the mixed products `x_i x_j` (`i < j`) in lexicographic
//! order. For two variables this is `(x, y, x², y², xy)`. Entries hold
//! derivatives, not Taylor coefficients: with `jet(h) = (∂_k h, ∂_kl h)` one
//! has `jet(h ∘ F) = J(F) · jet(h)`.

use std::ops;

use crate::ball::{Ball, BallError, BallMatrix, Precision, Scalar};

#[derive(Clone, Debug)]
pub struct Taylor2 {
    v: Ball,
    g: Vec<Ball>,
    /// Full symmetric Hessian, row-major `n × n`.
    h: Vec<Ball>,
}

impl Taylor2 {
    pub fn constant(v: Ball, n: usize) -> Taylor2 {
        let z = Ball::zero(v.prec());
        Taylor2 {
            g: vec![z.clone(); n],
            h: vec![z; n * n],
            v,
        }
    }

    /// The `k`-th coordinate variable at value `v`.
    pub fn variable(v: Ball, k: usize, n: usize) -> Taylor2 {
        let mut t = Taylor2::constant(v, n);
        t.g[k] = t.v.int(1);
        t
    }

    /// Coordinate variables at a point.
    pub fn variables(point: &[Ball]) -> Vec<Taylor2> {
        let n = point.len();
        point
            .iter()
            .enumerate()
            .map(|(k, v)| Taylor2::variable(v.clone(), k, n))
            .collect()
    }

    pub fn nvars(&self) -> usize {
        self.g.len()
    }

    pub fn value(&self) -> &Ball {
        &self.v
    }

    pub fn grad(&self, k: usize) -> &Ball {
        &self.g[k]
    }

    pub fn hess(&self, k: usize, l: usize) -> &Ball {
        &self.h[k * self.nvars() + l]
    }

    /// `phi(self)` from `phi`, `phi'` and `phi''` evaluated at the value.
    fn compose(&self, f0: Ball, f1: Ball, f2: Ball) -> Taylor2 {
        let n = self.nvars();
        let g: Vec<Ball> = self.g.iter().map(|gi| f1.mul(gi)).collect();
        let mut h = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                h.push(f1.mul(self.hess(i, j)).add(&f2.mul(&self.g[i].mul(&self.g[j]))));
            }
        }
        Taylor2 { v: f0, g, h }
    }

    pub fn recip(&self) -> Result<Taylor2, BallError> {
        let r = self.v.recip()?;
        let r2 = r.sqr();
        let f1 = r2.neg();
        let f2 = r2.mul(&r).mul_i64(2);
        Ok(self.compose(r, f1, f2))
    }

    pub fn sqrt(&self) -> Result<Taylor2, BallError> {
        let s = self.v.sqrt()?;
        let f1 = s.mul_i64(2).recip()?;
        // d²/du² sqrt(u) = -1 / (4 u^(3/2))
        let f2 = s.mul(&self.v).mul_i64(4).recip()?.neg();
        Ok(self.compose(s, f1, f2))
    }

    fn zip(&self, o: &Taylor2, f: impl Fn(&Ball, &Ball) -> Ball) -> Taylor2 {
        assert_eq!(self.nvars(), o.nvars(), "Taylor numbers over different variables");
        Taylor2 {
            v: f(&self.v, &o.v),
            g: self.g.iter().zip(&o.g).map(|(a, b)| f(a, b)).collect(),
            h: self.h.iter().zip(&o.h).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl ops::Add for Taylor2 {
    type Output = Taylor2;
    fn add(self, o: Taylor2) -> Taylor2 {
        self.zip(&o, |a, b| a.add(b))
    }
}

impl ops::Sub for Taylor2 {
    type Output = Taylor2;
    fn sub(self, o: Taylor2) -> Taylor2 {
        self.zip(&o, |a, b| a.sub(b))
    }
}

impl ops::Neg for Taylor2 {
    type Output = Taylor2;
    fn neg(self) -> Taylor2 {
        Taylor2 {
            v: self.v.neg(),
            g: self.g.iter().map(Ball::neg).collect(),
            h: self.h.iter().map(Ball::neg).collect(),
        }
    }
}

impl ops::Mul for Taylor2 {
    type Output = Taylor2;
    fn mul(self, o: Taylor2) -> Taylor2 {
        let n = self.nvars();
        assert_eq!(n, o.nvars(), "Taylor numbers over different variables");
        let g = (0..n)
            .map(|k| &(&self.v * &o.g[k]) + &(&o.v * &self.g[k]))
            .collect();
        let mut h = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let t = &(&(&self.v * o.hess(i, j)) + &(&o.v * self.hess(i, j)))
                    + &(&(&self.g[i] * &o.g[j]) + &(&self.g[j] * &o.g[i]));
                h.push(t);
            }
        }
        Taylor2 {
            v: &self.v * &o.v,
            g,
            h,
        }
    }
}

impl Scalar for Taylor2 {
    fn int(&self, v: i64) -> Taylor2 {
        Taylor2::constant(Ball::from_i64(v, self.v.prec()), self.nvars())
    }

    fn embed(&self, b: &Ball) -> Taylor2 {
        Taylor2::constant(b.clone(), self.nvars())
    }

    fn try_div(&self, rhs: &Taylor2) -> Result<Taylor2, BallError> {
        Ok(self.clone() * rhs.recip()?)
    }

    fn try_sqrt(&self) -> Result<Taylor2, BallError> {
        self.sqrt()
    }
}

/// Size of the degree-≤2 monomial basis (without the constant) in `n` variables.
pub fn basis_len(n: usize) -> usize {
    n + n * (n + 1) / 2
}

/// Variable pairs `(k, l)` of the second-order basis elements, in basis order.
pub fn second_order_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..n).map(|k| (k, k)).collect();
    for k in 0..n {
        for l in k + 1..n {
            pairs.push((k, l));
        }
    }
    pairs
}

/// Jet matrix of `F = (F_1..F_m)` given as Taylor numbers over `n` variables.
///
/// Rows are indexed by the source basis, columns by the target basis.
pub fn jet_matrix(f: &[Taylor2]) -> BallMatrix {
    let m = f.len();
    let n = f.first().map(Taylor2::nvars).unwrap_or(0);
    let prec = f
        .first()
        .map(|t| t.value().prec())
        .unwrap_or(Precision::DEFAULT);
    let src = second_order_pairs(n);
    let dst = second_order_pairs(m);
    let mut j = BallMatrix::zeros(basis_len(n), basis_len(m), prec);
    for (c, fk) in f.iter().enumerate() {
        for s in 0..n {
            j.set(s, c, fk.grad(s).clone());
        }
        for (r, &(s, t)) in src.iter().enumerate() {
            j.set(n + r, c, fk.hess(s, t).clone());
        }
    }
    for (c, &(k, l)) in dst.iter().enumerate() {
        for (r, &(s, t)) in src.iter().enumerate() {
            let v = if k == l {
                f[k].grad(s).mul(f[k].grad(t))
            } else {
                f[k].grad(s).mul(f[l].grad(t)).add(&f[l].grad(s).mul(f[k].grad(t)))
            };
            j.set(n + r, m + c, v);
        }
    }
    j
}

/// Evaluate `f` on Taylor variables at `point`; returns the value and the jet matrix.
pub fn jet_at<F>(point: &[Ball], f: F) -> Result<(Vec<Ball>, BallMatrix), BallError>
where
    F: FnOnce(&[Taylor2]) -> Result<Vec<Taylor2>, BallError>,
{
    let vars = Taylor2::variables(point);
    let out = f(&vars)?;
    let values = out.iter().map(|t| t.value().clone()).collect();
    Ok((values, jet_matrix(&out)))
}

/// Jacobian `DF` (`m × n`) read off a jet matrix of a map `R^n -> R^m`.
pub fn jacobian_from_jet(j: &BallMatrix, n: usize, m: usize) -> BallMatrix {
    BallMatrix::from_fn(m, n, |r, c| j.get(c, r).clone())
}
