use super::{Ball, BallError, Mag, Precision};

/// Dense row-major matrix of balls.
#[derive(Clone, Debug, PartialEq)]
pub struct BallMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Ball>,
}

impl BallMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Ball) -> BallMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        BallMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize, prec: Precision) -> BallMatrix {
        BallMatrix::from_fn(rows, cols, |_, _| Ball::zero(prec))
    }

    pub fn identity(n: usize, prec: Precision) -> BallMatrix {
        BallMatrix::from_fn(n, n, |i, j| Ball::from_i64((i == j) as i64, prec))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Ball {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Ball) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Ball] {
        &self.data
    }

    fn prec(&self) -> Precision {
        self.data.first().map(|b| b.prec()).unwrap_or_default()
    }

    pub fn transpose(&self) -> BallMatrix {
        BallMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &BallMatrix) -> BallMatrix {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let prec = self.prec().max(o.prec());
        BallMatrix::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).fold(Ball::zero(prec), |acc, k| {
                &acc + &self.get(i, k).mul(o.get(k, j))
            })
        })
    }

    pub fn add(&self, o: &BallMatrix) -> BallMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        BallMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(o.get(i, j)))
    }

    pub fn sub(&self, o: &BallMatrix) -> BallMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        BallMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(o.get(i, j)))
    }

    pub fn midpoint(&self) -> BallMatrix {
        BallMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).midpoint_ball())
    }

    /// Largest entry radius.
    pub fn max_radius(&self) -> Mag {
        self.data.iter().fold(Mag::ZERO, |m, b| m.max(b.rad()))
    }

    /// Upper bound of the max-row-sum norm.
    pub fn norm_inf_upper(&self) -> Mag {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Mag::ZERO, |s, j| s.add(self.get(i, j).mag_upper())))
            .fold(Mag::ZERO, Mag::max)
    }

    /// Enclosure of the Frobenius norm.
    pub fn frobenius(&self) -> Result<Ball, BallError> {
        super::norm2(&self.data)
    }

    /// Non-rigorous inverse of the midpoint matrix by Gauss-Jordan elimination.
    fn approximate_inverse(&self) -> Result<BallMatrix, BallError> {
        let n = self.rows;
        let prec = self.prec();
        let mut a = self.midpoint();
        let mut inv = BallMatrix::identity(n, prec);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a.get(r, col).mid().abs().cmp(&a.get(s, col).mid().abs()))
                .expect("non-empty range");
            if a.get(pivot, col).mid().is_zero() {
                return Err(BallError::Singular("matrix is numerically singular"));
            }
            for k in 0..n {
                a.data.swap(col * n + k, pivot * n + k);
                inv.data.swap(col * n + k, pivot * n + k);
            }
            let p = a.get(col, col).clone();
            for k in 0..n {
                let v = a.get(col, k).div(&p)?.midpoint_ball();
                a.set(col, k, v);
                let w = inv.get(col, k).div(&p)?.midpoint_ball();
                inv.set(col, k, w);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.mid().is_zero() {
                    continue;
                }
                for k in 0..n {
                    let v = a.get(r, k).sub(&factor.mul(a.get(col, k))).midpoint_ball();
                    a.set(r, k, v);
                    let w = inv.get(r, k).sub(&factor.mul(inv.get(col, k))).midpoint_ball();
                    inv.set(r, k, w);
                }
            }
        }
        Ok(inv)
    }

    /// Verified inverse: every matrix inside the ball matrix is invertible and
    /// its inverse lies inside the returned ball matrix.
    ///
    /// An approximate inverse `R` of the midpoint matrix is checked through
    /// `E = I - R A`; when `||E||_inf < 1` the Neumann series gives
    /// `|A^-1 - R| <= max|E R| / (1 - ||E||)` entrywise.
    pub fn verified_inverse(&self) -> Result<BallMatrix, BallError> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let prec = self.prec();
        let r = self.approximate_inverse()?;
        let e = BallMatrix::identity(n, prec).sub(&r.mul(self));
        let beta = e.norm_inf_upper();
        let gap = Mag::from_u64(1)
            .sub_down(beta)
            .ok_or(BallError::Singular("inverse verification failed"))?;
        let er = e.mul(&r);
        let worst = er.data.iter().fold(Mag::ZERO, |m, b| m.max(b.mag_upper()));
        let delta = worst
            .div_up(gap)
            .ok_or(BallError::Singular("inverse verification failed"))?;
        Ok(BallMatrix::from_fn(n, n, |i, j| r.get(i, j).inflate(delta)))
    }
}
