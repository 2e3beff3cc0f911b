//! Scalar abstraction: every quantity in this crate is generic over the
//! floating-point type through [`Scalar`], implemented for `f32` and `f64`.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar type the whole model is generic over.
///
/// Combines [`nalgebra::RealField`] (field arithmetic, `sqrt`, `exp`, `ln`,
/// eigen/LU support) with the `num-traits` primitive conversions used for
/// literals and diagnostics. Blanket-implemented for `f32` and `f64`.
pub trait Scalar: RealField + FromPrimitive + ToPrimitive + Copy {
    /// Converts an `f64` literal into `Self`.
    ///
    /// Panics if the conversion is not representable, which cannot happen for
    /// the finite literals this crate uses.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal must be representable in the scalar type")
    }

    /// Lossy view as `f64`, used for error payloads and reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// True when the value is neither NaN nor infinite.
    fn is_finite_scalar(self) -> bool {
        self.as_f64().is_finite()
    }
}

impl<T> Scalar for T where T: RealField + FromPrimitive + ToPrimitive + Copy {}
