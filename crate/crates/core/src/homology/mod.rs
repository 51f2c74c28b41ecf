//! Exact linear algebra on the lattice `W` spanned by the twelve curves
//! `p_1, ..., p_12`.
//!
//! Each curve is a line `P¹ × {pt} × {pt}` (up to ordering of the factors)
//! where one fixed coordinate is `∞` and the other is `±i`. The intersection
//! form `M` and the pairing `S = (⟨σ_1 p_i | p_j⟩)` are constants; the
//! induced action of `σ_1` is recovered as `M⁻¹S`, and the actions of
//! `σ_2`, `σ_3` are obtained by conjugating with the coordinate swaps, which
//! permute the curves. The characteristic polynomial of `f* = σ_3* σ_2* σ_1*`
//! contains a Salem factor whose real root above 1 is the spectral radius.
//!
//! Indices are 0-based internally; anything printed for people uses `p_1..p_12`.

pub mod poly;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::ball::Ball;
use crate::surface::Axis;
pub use poly::{IntPoly, PolyError};

pub const RANK: usize = 12;

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error("M⁻¹S has a non-integral entry at ({row}, {col}): {value}")]
    Integrality { row: usize, col: usize, value: String },
    #[error("matrix is singular")]
    Singular,
    #[error("Salem factor does not divide the characteristic polynomial (remainder {0})")]
    Factor(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Square integer matrix acting on column vectors of `p`-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> IntMatrix {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        IntMatrix { n, data }
    }

    pub fn from_rows(rows: &[[i64; RANK]; RANK]) -> IntMatrix {
        IntMatrix::from_fn(RANK, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn identity(n: usize) -> IntMatrix {
        IntMatrix::from_fn(n, |i, j| BigInt::from((i == j) as i64))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, o.n, "matrix size mismatch");
        IntMatrix::from_fn(self.n, |i, j| {
            (0..self.n).map(|k| self.get(i, k) * o.get(k, j)).sum()
        })
    }

    pub fn apply(&self, v: &ClassVector) -> ClassVector {
        ClassVector(
            (0..self.n)
                .map(|i| (0..self.n).map(|k| self.get(i, k) * &v.0[k]).sum())
                .collect(),
        )
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    /// `σᵀ M σ = M`.
    pub fn preserves(&self, form: &IntMatrix) -> bool {
        &self.transpose().mul(form).mul(self) == form
    }

    pub fn is_involution(&self) -> bool {
        self.mul(self) == IntMatrix::identity(self.n)
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j).to_i64().expect("entry fits in i64"))
                    .collect()
            })
            .collect()
    }

    fn to_rational(&self) -> Vec<Vec<BigRational>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| BigRational::from_integer(self.get(i, j).clone()))
                    .collect()
            })
            .collect()
    }

    pub fn determinant(&self) -> BigInt {
        let mut a = self.to_rational();
        let n = self.n;
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return BigInt::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let pivot = a[c][c].clone();
            det *= &pivot;
            for r in c + 1..n {
                let factor = &a[r][c] / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = &a[c][k] * &factor;
                    a[r][k] -= v;
                }
            }
        }
        det.to_integer()
    }

    /// Exact inverse over the rationals.
    pub fn inverse_rational(&self) -> Result<Vec<Vec<BigRational>>, HomologyError> {
        let n = self.n;
        let mut a = self.to_rational();
        let mut inv = IntMatrix::identity(n).to_rational();
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a[r][c].is_zero())
                .ok_or(HomologyError::Singular)?;
            a.swap(p, c);
            inv.swap(p, c);
            let pivot = a[c][c].clone();
            for k in 0..n {
                a[c][k] /= &pivot;
                inv[c][k] /= &pivot;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let factor = a[r][c].clone();
                for k in 0..n {
                    let v = &a[c][k] * &factor;
                    a[r][k] -= v;
                    let w = &inv[c][k] * &factor;
                    inv[r][k] -= w;
                }
            }
        }
        Ok(inv)
    }

    /// Characteristic polynomial `det(xI - A)` by the Faddeev–LeVerrier
    /// recursion; every division is exact over the integers.
    pub fn char_poly(&self) -> IntPoly {
        let n = self.n;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = IntMatrix::from_fn(n, |_, _| BigInt::zero());
        for k in 1..=n {
            let prev = coeffs[n - k + 1].clone();
            m = IntMatrix::from_fn(n, |i, j| {
                let mut v = (0..n).map(|l| self.get(i, l) * m.get(l, j)).sum::<BigInt>();
                if i == j {
                    v += &prev;
                }
                v
            });
            let t = self.mul(&m).trace();
            let kb = BigInt::from(k);
            debug_assert!((&t % &kb).is_zero());
            coeffs[n - k] = -(t / kb);
        }
        IntPoly::new(coeffs)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{:>3}", self.get(i, j))).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Coordinates of a class in the basis `p_1..p_12`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassVector(pub Vec<BigInt>);

impl ClassVector {
    /// Sum of the basis curves with the given 1-based labels.
    pub fn from_curves(labels: &[usize]) -> ClassVector {
        let mut v = vec![BigInt::zero(); RANK];
        for &l in labels {
            v[l - 1] += 1;
        }
        ClassVector(v)
    }

    pub fn from_i64(coords: &[i64]) -> ClassVector {
        ClassVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn add(&self, o: &ClassVector) -> ClassVector {
        ClassVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> ClassVector {
        ClassVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn sub(&self, o: &ClassVector) -> ClassVector {
        self.add(&o.scale(-1))
    }
}

/// `⟨v, w⟩ = vᵀ M w`.
pub fn pairing(form: &IntMatrix, v: &ClassVector, w: &ClassVector) -> BigInt {
    let mw = form.apply(w);
    v.0.iter().zip(&mw.0).map(|(a, b)| a * b).sum()
}

/// Fixed coordinate value of a curve: `∞`, `i` or `-i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixed {
    Infinity,
    I,
    MinusI,
}

/// `p_k`: free in one coordinate, fixed in the other two (listed in axis order).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Curve {
    pub free: Axis,
    pub fixed: [(Axis, Fixed); 2],
}

impl Curve {
    fn fixed_at(&self, axis: Axis) -> Option<Fixed> {
        self.fixed.iter().find(|(a, _)| *a == axis).map(|&(_, v)| v)
    }
}

/// The twelve curves in basis order.
pub fn curves() -> [Curve; RANK] {
    use Axis::{X, Y, Z};
    use Fixed::{Infinity as Inf, MinusI as Mi, I};
    let c = |free, a, va, b, vb| Curve { free, fixed: [(a, va), (b, vb)] };
    [
        c(X, Y, Inf, Z, I),
        c(X, Y, Inf, Z, Mi),
        c(X, Y, I, Z, Inf),
        c(X, Y, Mi, Z, Inf),
        c(Y, X, Inf, Z, I),
        c(Y, X, Inf, Z, Mi),
        c(Y, X, I, Z, Inf),
        c(Y, X, Mi, Z, Inf),
        c(Z, X, Inf, Y, I),
        c(Z, X, Inf, Y, Mi),
        c(Z, X, I, Y, Inf),
        c(Z, X, Mi, Y, Inf),
    ]
}

/// Permutation matrix of the curves induced by exchanging coordinates `a` and `b`;
/// entry `(j, i)` is 1 when `p_i` is sent to `p_j`.
pub fn swap_permutation(a: Axis, b: Axis) -> IntMatrix {
    let swap = |x: Axis| {
        if x == a {
            b
        } else if x == b {
            a
        } else {
            x
        }
    };
    let cs = curves();
    let mut target = [0usize; RANK];
    for (i, c) in cs.iter().enumerate() {
        target[i] = cs
            .iter()
            .position(|d| {
                d.free == swap(c.free)
                    && c.fixed.iter().all(|&(ax, v)| d.fixed_at(swap(ax)) == Some(v))
            })
            .expect("curve set is closed under coordinate swaps");
    }
    IntMatrix::from_fn(RANK, |j, i| BigInt::from((target[i] == j) as i64))
}

const M_ROWS: [[i64; RANK]; RANK] = [
    [-2, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 1],
    [0, -2, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1],
    [0, 0, -2, 0, 0, 0, 1, 1, 1, 0, 0, 0],
    [0, 0, 0, -2, 0, 0, 1, 1, 0, 1, 0, 0],
    [1, 0, 0, 0, -2, 0, 0, 0, 1, 1, 0, 0],
    [0, 1, 0, 0, 0, -2, 0, 0, 1, 1, 0, 0],
    [0, 0, 1, 1, 0, 0, -2, 0, 0, 0, 1, 0],
    [0, 0, 1, 1, 0, 0, 0, -2, 0, 0, 0, 1],
    [0, 0, 1, 0, 1, 1, 0, 0, -2, 0, 0, 0],
    [0, 0, 0, 1, 1, 1, 0, 0, 0, -2, 0, 0],
    [1, 1, 0, 0, 0, 0, 1, 0, 0, 0, -2, 0],
    [1, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, -2],
];

const S_ROWS: [[i64; RANK]; RANK] = [
    [-2, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 1],
    [0, -2, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1],
    [0, 0, -2, 0, 0, 0, 1, 1, 1, 0, 0, 0],
    [0, 0, 0, -2, 0, 0, 1, 1, 0, 1, 0, 0],
    [1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, -2, 0, 0, 0, 1],
    [0, 0, 1, 1, 0, 0, -2, 0, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0],
    [1, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, -2],
    [1, 1, 0, 0, 0, 0, 1, 0, 0, 0, -2, 0],
];

const SIGMA1_ROWS: [[i64; RANK]; RANK] = [
    [1, 0, 0, 0, -1, 0, 0, 0, 1, 1, 0, 0],
    [0, 1, 0, 0, 0, -1, 0, 0, 1, 1, 0, 0],
    [0, 0, 1, 0, 1, 1, 0, 0, -1, 0, 0, 0],
    [0, 0, 0, 1, 1, 1, 0, 0, 0, -1, 0, 0],
    [0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0],
];

/// Published matrix for `σ_2*`; see [`printed_action`].
const SIGMA2_PRINTED: [[i64; RANK]; RANK] = [
    [-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 0, 0, 1, 0, 0, 0, -1, 0, 0, 0],
    [1, 1, 0, 0, 0, 1, 0, 0, 0, -1, 0, 0],
    [-1, 0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 0],
    [0, -1, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0],
];

const SIGMA3_PRINTED: [[i64; RANK]; RANK] = [
    [-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0],
    [-1, 0, 0, 0, 1, 1, 0, 0, 1, 0, 0, 0],
    [0, -1, 0, 0, 1, 1, 0, 0, 0, 1, 0, 0],
    [1, 1, 0, 0, -1, 0, 0, 0, 0, 0, 1, 0],
    [1, 1, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1],
];

const F_STAR_ROWS: [[i64; RANK]; RANK] = [
    [2, 1, 1, 1, 0, 1, 0, 0, 2, 2, 0, 0],
    [1, 2, 1, 1, 1, 0, 0, 0, 2, 2, 0, 0],
    [-1, -1, 0, -1, 0, 0, 0, 0, -2, -1, 0, 0],
    [-1, -1, -1, 0, 0, 0, 0, 0, -1, -2, 0, 0],
    [2, 1, 0, 0, 0, 0, 1, 1, 3, 3, 0, 0],
    [1, 2, 0, 0, 0, 0, 1, 1, 3, 3, 0, 0],
    [-1, -1, 0, 0, 0, 0, 0, -1, -1, -1, 0, 1],
    [-1, -1, 0, 0, 0, 0, -1, 0, -1, -1, 1, 0],
    [1, 1, 0, -1, 0, 0, 1, 1, 2, 2, 0, 0],
    [1, 1, -1, 0, 0, 0, 1, 1, 2, 2, 0, 0],
    [1, 1, 1, 1, 0, 0, 0, -1, 1, 1, 0, 0],
    [1, 1, 1, 1, 0, 0, -1, 0, 1, 1, 0, 0],
];

/// Intersection form `M = (⟨p_i | p_j⟩)` and `S = (⟨σ_1 p_i | p_j⟩)`.
pub fn intersection_matrices() -> (IntMatrix, IntMatrix) {
    (IntMatrix::from_rows(&M_ROWS), IntMatrix::from_rows(&S_ROWS))
}

pub fn intersection_form() -> IntMatrix {
    IntMatrix::from_rows(&M_ROWS)
}

/// `σ̃_1 = M⁻¹S`, required to be integral.
pub fn sigma1_tilde() -> Result<IntMatrix, HomologyError> {
    let (m, s) = intersection_matrices();
    let inv = m.inverse_rational()?;
    let mut out = Vec::with_capacity(RANK * RANK);
    for i in 0..RANK {
        for j in 0..RANK {
            let v: BigRational = (0..RANK)
                .map(|k| &inv[i][k] * BigRational::from_integer(s.get(k, j).clone()))
                .fold(BigRational::zero(), |a, b| a + b);
            if !v.is_integer() {
                return Err(HomologyError::Integrality { row: i, col: j, value: v.to_string() });
            }
            out.push(v.to_integer());
        }
    }
    Ok(IntMatrix { n: RANK, data: out })
}

/// Induced action of `σ_k` on `W`. `σ_1` comes from `M⁻¹S`; `σ_2` and `σ_3`
/// are its conjugates by the curve permutations of the swaps `x ↔ y` and
/// `x ↔ z`, since `q_A` is symmetric in its three coordinates.
pub fn induced_action(axis: Axis) -> Result<IntMatrix, HomologyError> {
    let s1 = sigma1_tilde()?;
    Ok(match axis {
        Axis::X => s1,
        other => {
            let t = swap_permutation(Axis::X, other);
            t.mul(&s1).mul(&t)
        }
    })
}

/// The matrices for `σ_1*`, `σ_2*`, `σ_3*` and `f*` exactly as published.
///
/// The published `σ_2*` and `σ_3*` do not preserve `M` and differ from
/// [`induced_action`]; they are kept for comparison only.
pub fn printed_action(which: PrintedMatrix) -> IntMatrix {
    IntMatrix::from_rows(match which {
        PrintedMatrix::Sigma1 => &SIGMA1_ROWS,
        PrintedMatrix::Sigma2 => &SIGMA2_PRINTED,
        PrintedMatrix::Sigma3 => &SIGMA3_PRINTED,
        PrintedMatrix::FStar => &F_STAR_ROWS,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrintedMatrix {
    Sigma1,
    Sigma2,
    Sigma3,
    FStar,
}

/// `f* = σ_3* σ_2* σ_1*` from the induced actions.
pub fn f_star() -> Result<IntMatrix, HomologyError> {
    let s1 = induced_action(Axis::X)?;
    let s2 = induced_action(Axis::Y)?;
    let s3 = induced_action(Axis::Z)?;
    Ok(s3.mul(&s2).mul(&s1))
}

/// Inertia `(positive, negative, zero)` of a symmetric integer matrix, by
/// exact congruence diagonalization.
pub fn signature(form: &IntMatrix) -> (usize, usize, usize) {
    let n = form.size();
    let mut a = form.to_rational();
    let mut counts = (0, 0, 0);
    for c in 0..n {
        if a[c][c].is_zero() {
            if let Some(p) = (c + 1..n).find(|&r| !a[r][r].is_zero()) {
                a.swap(c, p);
                for row in a.iter_mut() {
                    row.swap(c, p);
                }
            } else if let Some(p) = (c + 1..n).find(|&r| !a[c][r].is_zero()) {
                // replace e_c by e_c + e_p: diagonal becomes 2 a[c][p] + a[p][p] = 2 a[c][p]
                for k in 0..n {
                    let v = a[p][k].clone();
                    a[c][k] += v;
                }
                for k in 0..n {
                    let v = a[k][p].clone();
                    a[k][c] += v;
                }
            }
        }
        let pivot = a[c][c].clone();
        if pivot.is_zero() {
            counts.2 += 1;
            continue;
        }
        if pivot.is_positive() {
            counts.0 += 1;
        } else {
            counts.1 += 1;
        }
        for r in c + 1..n {
            let factor = &a[r][c] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for k in c..n {
                let v = &a[c][k] * &factor;
                a[r][k] -= v;
            }
            for k in c..n {
                let v = &a[k][c] * &factor;
                a[k][r] -= v;
            }
        }
    }
    counts
}

/// Everything needed to report the complex entropy.
#[derive(Clone, Debug, Serialize)]
pub struct SalemData {
    pub char_poly: Vec<i64>,
    pub salem_factor: Vec<i64>,
    pub cofactor: Vec<i64>,
    /// Midpoint of the certified root enclosure.
    pub root: String,
    /// The enclosure itself, `mid ± rad`.
    pub enclosure: String,
}

/// Salem factor `x⁶ - 5x⁵ - 6x⁴ - 5x³ - 6x² - 5x + 1`.
pub fn salem_factor() -> IntPoly {
    IntPoly::from_i64(&[1, -5, -6, -5, -6, -5, 1])
}

/// Divide out the Salem factor exactly; returns `(factor, cofactor)`.
pub fn salem_split(char_poly: &IntPoly) -> Result<(IntPoly, IntPoly), HomologyError> {
    let factor = salem_factor();
    let (q, r) = char_poly.div_rem_monic(&factor);
    if !r.is_zero() {
        return Err(HomologyError::Factor(r.to_string()));
    }
    Ok((factor, q))
}

/// Enclosure of the spectral radius: the unique root of the Salem factor in
/// `(1, 8]`, with at least `digits` correct decimal digits.
pub fn spectral_radius(factor: &IntPoly, digits: u32) -> Result<Ball, HomologyError> {
    let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8;
    Ok(factor.isolate_root(1, 8, bits)?)
}

/// Full computation for `f*`: characteristic polynomial, Salem split and root.
pub fn salem(f: &IntMatrix, digits: u32) -> Result<SalemData, HomologyError> {
    let cp = f.char_poly();
    let (factor, cofactor) = salem_split(&cp)?;
    let root = spectral_radius(&factor, digits)?;
    Ok(SalemData {
        char_poly: cp.to_i64(),
        salem_factor: factor.to_i64(),
        cofactor: cofactor.to_i64(),
        root: root.mid().to_decimal(digits as usize),
        enclosure: root.to_decimal(digits as usize + 4),
    })
}

/// `⟨c, (f*)ᵏ c⟩` for `k = 0..=n`.
pub fn pairing_growth(form: &IntMatrix, f: &IntMatrix, c: &ClassVector, n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    let mut v = c.clone();
    out.push(pairing(form, c, &v));
    for _ in 0..n {
        v = f.apply(&v);
        out.push(pairing(form, c, &v));
    }
    out
}

/// Fibre classes `[c_1]`, `[c_2]`, `[c_3]` of the three projections to `P¹`.
pub fn fibre_classes() -> [ClassVector; 3] {
    [
        ClassVector::from_curves(&[5, 6, 9, 10]),
        ClassVector::from_curves(&[1, 2, 11, 12]),
        ClassVector::from_curves(&[3, 4, 7, 8]),
    ]
}

/// Consecutive ratios of a positive integer sequence, as `f64`.
pub fn growth_ratios(seq: &[BigInt]) -> Vec<f64> {
    seq.windows(2)
        .map(|w| {
            let a = w[0].to_f64().unwrap_or(f64::NAN);
            let b = w[1].to_f64().unwrap_or(f64::NAN);
            b / a
        })
        .collect()
}
