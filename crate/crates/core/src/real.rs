//! Scalar abstraction for the numeric kernels.
//!
//! Everything in this crate is written against [`Real`] so the same code runs
//! at `f32` or `f64` precision. The tolerances quoted throughout the
//! documentation assume `f64`; concrete aliases at the crate root pin that
//! instantiation.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, RemAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar with the operations the harmonic/quadrature kernels need.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + RemAssign
    + Sum<Self>
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; panics only for values a float type cannot
    /// represent at all (never for finite inputs on f32/f64).
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 must convert into a Real scalar")
    }

    /// Exact-for-small-integers conversion used for recurrence coefficients.
    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).expect("usize must convert into a Real scalar")
    }

    /// Signed integer conversion for harmonic orders and offsets.
    fn of_i64(value: i64) -> Self {
        Self::from_i64(value).expect("i64 must convert into a Real scalar")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + RemAssign
        + Sum<T>
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}
