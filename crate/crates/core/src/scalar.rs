//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Magnitude of the internal generator argument above which the
    /// asymptotic expansion replaces the closed form.
    fn asymptotic_switch() -> Self;

    /// Converts an `f64` literal. Panics only if the literal is not
    /// representable, which never happens for the constants used here.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    #[inline]
    fn asymptotic_switch() -> f64 {
        1e154
    }
}

impl Scalar for f32 {
    #[inline]
    fn asymptotic_switch() -> f32 {
        1e19
    }
}
