//! Numeric traits the crate is generic over.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed};

/// Floating-point scalar for the numerical pipeline: `f32` or `f64`.
pub trait Scalar:
    Float + Signed + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the value is not representable
    /// at all, which never happens for the constants used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// An ordered field. Enough structure for the rational-function pieces of the
/// optics (interface coefficients, the two-interface recursion, the mode
/// weight 1/d), which therefore also run exactly over `num_rational::Ratio`.
pub trait Field: Num + Signed + PartialOrd + Copy + Debug {}

impl<F: Num + Signed + PartialOrd + Copy + Debug> Field for F {}
