use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar used by the modular and norm computations: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Smallest relative tolerance the bisection can honour for this type.
    fn min_rel_tol() -> Self;

    /// Default relative tolerance, `1e-12` clamped to what the type resolves.
    fn default_rel_tol() -> Self {
        let requested = Self::from_f64(1e-12).unwrap();
        requested.max(Self::min_rel_tol())
    }

    fn from_f64_lossy(value: f64) -> Self {
        Self::from_f64(value).unwrap_or_else(Self::nan)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    fn min_rel_tol() -> Self {
        8.0 * f32::EPSILON
    }
}

impl Scalar for f64 {
    fn min_rel_tol() -> Self {
        8.0 * f64::EPSILON
    }
}
