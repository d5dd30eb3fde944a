//! Scalar abstraction shared by the geometry, linkage and planning code.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar the kinematics and solvers are written against.
///
/// Tolerances in this crate are specified for `f64`. [`Real::tol`] floors
/// them at a small multiple of the type's machine epsilon so the same code
/// paths stay usable with `f32`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// A tolerance of `x`, or 64 ulps at unit scale when that is larger.
    #[inline]
    fn tol(x: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(64.0);
        Self::lit(x).max(floor)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn tau() -> Self {
        Self::TAU()
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle<T: Real>(angle: T) -> T {
    let tau = T::tau();
    let mut a = angle % tau;
    if a < T::zero() {
        a = a + tau;
    }
    if a >= tau {
        a = a - tau;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_floor_depends_on_precision() {
        assert_eq!(<f64 as Real>::tol(1e-9), 1e-9);
        assert!(<f32 as Real>::tol(1e-9) > 1e-6);
    }

    #[test]
    fn wrap_into_principal_range() {
        let tau = std::f64::consts::TAU;
        assert_eq!(wrap_angle(0.0_f64), 0.0);
        assert!((wrap_angle(-0.5_f64) - (tau - 0.5)).abs() < 1e-15);
        assert!((wrap_angle(tau + 0.25) - 0.25).abs() < 1e-15);
        assert!(wrap_angle(tau) < tau);
    }
}
