use std::ops::{Add, Mul, Neg, Sub};

use super::{Ball, BallError};

/// Field-like numbers the surface formulas can be evaluated over.
///
/// Implemented for [`Ball`] (rigorous), `f64` (plotting and arc tracking)
/// and the second-order Taylor numbers used for jets.
pub trait Scalar:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// The integer `v` as a constant of the same kind (precision, number of
    /// variables) as `self`.
    fn int(&self, v: i64) -> Self;

    /// A ball constant converted to the same kind as `self`.
    fn embed(&self, b: &Ball) -> Self;

    fn try_div(&self, rhs: &Self) -> Result<Self, BallError>;

    fn try_sqrt(&self) -> Result<Self, BallError>;

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl Scalar for Ball {
    fn int(&self, v: i64) -> Ball {
        Ball::from_i64(v, self.prec())
    }

    fn embed(&self, b: &Ball) -> Ball {
        b.clone()
    }

    fn try_div(&self, rhs: &Ball) -> Result<Ball, BallError> {
        self.div(rhs)
    }

    fn try_sqrt(&self) -> Result<Ball, BallError> {
        self.sqrt()
    }

    fn square(&self) -> Ball {
        self.sqr()
    }
}

impl Scalar for f64 {
    fn int(&self, v: i64) -> f64 {
        v as f64
    }

    fn embed(&self, b: &Ball) -> f64 {
        b.mid_f64()
    }

    fn try_div(&self, rhs: &f64) -> Result<f64, BallError> {
        if *rhs == 0.0 {
            Err(BallError::Singular("division by zero"))
        } else {
            Ok(self / rhs)
        }
    }

    fn try_sqrt(&self) -> Result<f64, BallError> {
        if *self < 0.0 {
            Err(BallError::Domain("square root of a negative number"))
        } else {
            Ok(self.sqrt())
        }
    }
}
