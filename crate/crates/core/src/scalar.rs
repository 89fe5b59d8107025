//! Scalar abstraction shared by the real-valued parts of the toolkit.
//!
//! Profile means and ordinal correlations only need field arithmetic, so they
//! are written against [`Scalar`] and work for `f32`, `f64` and exact
//! rationals alike. The normalized SSD needs a square root and is restricted
//! to [`num_traits::Float`].

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num};

/// Field-like number type usable for means and rank correlations.
pub trait Scalar: Num + Copy + PartialOrd + FromPrimitive + Debug + Send + Sync + 'static {
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }

    fn from_signed(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
impl Scalar for Ratio<i64> {}
impl Scalar for Ratio<i128> {}
