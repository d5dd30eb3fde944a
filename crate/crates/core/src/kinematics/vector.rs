use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A vector in R³.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    /// Component of `self` orthogonal to the unit vector `axis`.
    pub fn reject_from(self, axis: UnitVec3<T>) -> Self {
        self - axis.get().scale(self.dot(axis.get()))
    }

    pub fn max_abs_diff(self, other: Self) -> T {
        let d = self - other;
        d.x.abs().max(d.y.abs()).max(d.z.abs())
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

/// A vector of Euclidean norm one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVec3<T>(Vec3<T>);

impl<T: Real> UnitVec3<T> {
    /// Accepts `v` if its norm is within 1e-9 of one and renormalizes it.
    pub fn new(v: Vec3<T>) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || (n - T::one()).abs() > T::tol(1e-9) {
            return Err(Error::InvalidInput(format!(
                "expected a unit vector, norm is {}",
                n
            )));
        }
        Ok(Self(v.scale(T::one() / n)))
    }

    /// Normalizes any vector whose norm exceeds `min_norm`.
    pub fn normalize(v: Vec3<T>, min_norm: T) -> Option<Self> {
        let n = v.norm();
        if n.is_finite() && n > min_norm {
            Some(Self(v.scale(T::one() / n)))
        } else {
            None
        }
    }

    /// Wraps a vector already known to be unit length.
    pub(crate) fn new_unchecked(v: Vec3<T>) -> Self {
        Self(v)
    }

    pub fn e1() -> Self {
        Self(Vec3::new(T::one(), T::zero(), T::zero()))
    }

    pub fn e2() -> Self {
        Self(Vec3::new(T::zero(), T::one(), T::zero()))
    }

    pub fn e3() -> Self {
        Self(Vec3::new(T::zero(), T::zero(), T::one()))
    }

    #[inline]
    pub fn get(self) -> Vec3<T> {
        self.0
    }

    pub fn dot(self, other: Vec3<T>) -> T {
        self.0.dot(other)
    }

    /// Some unit vector orthogonal to `self`.
    pub fn any_orthogonal(self) -> Self {
        let v = self.0;
        // cross with the basis vector least aligned with v
        let pick = if v.x.abs() <= v.y.abs() && v.x.abs() <= v.z.abs() {
            Vec3::new(T::one(), T::zero(), T::zero())
        } else if v.y.abs() <= v.z.abs() {
            Vec3::new(T::zero(), T::one(), T::zero())
        } else {
            Vec3::new(T::zero(), T::zero(), T::one())
        };
        let c = v.cross(pick);
        Self(c.scale(T::one() / c.norm()))
    }
}

impl<T: Real> std::ops::Deref for UnitVec3<T> {
    type Target = Vec3<T>;
    fn deref(&self) -> &Vec3<T> {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_follows_right_hand_rule() {
        let x = Vec3::new(1.0, 0.0, 0.0);
        let y = Vec3::new(0.0, 1.0, 0.0);
        assert_eq!(x.cross(y), Vec3::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn unit_vector_rejects_long_vectors() {
        assert!(UnitVec3::new(Vec3::new(1.0, 1.0, 0.0)).is_err());
        assert!(UnitVec3::new(Vec3::new(0.0, 0.0, 1.0 + 1e-12)).is_ok());
    }

    #[test]
    fn orthogonal_probe_is_unit_and_orthogonal() {
        let a = UnitVec3::new(Vec3::new(0.6f64, 0.0, 0.8)).unwrap();
        let p = a.any_orthogonal();
        assert!(a.dot(p.get()).abs() < 1e-15);
        assert!((p.norm() - 1.0).abs() < 1e-15);
    }
}
