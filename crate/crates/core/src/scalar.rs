//! Floating-point scalar abstraction shared by the closed-form modules.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar the closed-form physics is written against: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Lossless-enough conversion of an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Scales a tolerance stated for `f64` to this precision.
    ///
    /// The ratio of machine epsilons is applied, so `f64` tolerances are
    /// returned unchanged and `f32` ones are widened by ~5e8.
    #[inline]
    fn tol(f64_tol: f64) -> Self {
        let ratio = Self::epsilon().to_f64().unwrap_or(f64::EPSILON) / f64::EPSILON;
        Self::lit(f64_tol * ratio.max(1.0))
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_scaling() {
        assert_eq!(<f64 as Real>::tol(1e-12), 1e-12);
        let t32 = <f32 as Real>::tol(1e-12);
        assert!(t32 > 1e-4 && t32 < 1e-3, "{t32}");
    }
}
