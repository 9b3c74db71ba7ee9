//! Numeric abstraction shared by all analysis code.
//!
//! Payoffs, margins, and probability constraints are generic over [`Scalar`]
//! with two backends: `f64` for everyday use, and [`BigRational`] for exact
//! arithmetic so that rational inputs (fraction strings like `"7/50"`) stay
//! exact end to end. In the exact backend all default tolerances collapse to
//! zero.

use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use std::fmt::{Debug, Display};

/// A real-number backend: `f64` or [`BigRational`].
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Signed + FromPrimitive + ToPrimitive + 'static
{
    /// True when arithmetic carries no rounding error.
    const EXACT: bool;

    /// The exact ratio `numer / denom`.
    ///
    /// Panics if `denom == 0`.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Exact conversion of a finite `f64` (every finite double is a dyadic
    /// rational). Panics on NaN or infinity.
    fn from_f64_exact(value: f64) -> Self;

    /// Lossy view as `f64`, for display and cross-backend comparisons.
    fn to_f64_lossy(&self) -> f64;

    /// False only for non-finite floats; rationals are always finite.
    fn is_finite_value(&self) -> bool;

    /// Integer constant.
    fn from_int(value: i64) -> Self {
        Self::from_i64(value).expect("integer representable in scalar backend")
    }

    /// Default tolerance: `hint` in the float backend, exactly zero in the
    /// exact backend.
    fn default_tol(hint: f64) -> Self {
        if Self::EXACT {
            Self::zero()
        } else {
            Self::from_f64_exact(hint)
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        numer as f64 / denom as f64
    }

    fn from_f64_exact(value: f64) -> Self {
        assert!(value.is_finite(), "non-finite value");
        value
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        BigRational::new(numer.into(), denom.into())
    }

    fn from_f64_exact(value: f64) -> Self {
        BigRational::from_f64(value).expect("non-finite value")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_value(&self) -> bool {
        true
    }
}

/// Sum of owned scalars.
pub fn sum<S: Scalar>(values: impl IntoIterator<Item = S>) -> S {
    values
        .into_iter()
        .fold(S::zero(), |acc, v| acc + v)
}

/// |a - b|
pub fn abs_diff<S: Scalar>(a: &S, b: &S) -> S {
    (a.clone() - b.clone()).abs()
}
