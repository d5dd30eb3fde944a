use std::ops::Mul;

use super::vector::{UnitVec3, Vec3};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A 3×3 matrix, stored row-major. When used as a frame its columns are
/// the Sabban vectors `X`, `T`, `N` in that order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rot3<T> {
    m: [[T; 3]; 3],
}

impl<T: Real> Rot3<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self {
            m: [[o, z, z], [z, o, z], [z, z, o]],
        }
    }

    /// Builds a matrix from rows without checking orthonormality.
    pub fn from_rows(m: [[T; 3]; 3]) -> Self {
        Self { m }
    }

    pub fn from_columns(c0: Vec3<T>, c1: Vec3<T>, c2: Vec3<T>) -> Self {
        Self {
            m: [
                [c0.x, c1.x, c2.x],
                [c0.y, c1.y, c2.y],
                [c0.z, c1.z, c2.z],
            ],
        }
    }

    /// Skew-symmetric matrix `[v]×` with `[v]× w = v × w`.
    pub fn skew(v: Vec3<T>) -> Self {
        let z = T::zero();
        Self {
            m: [[z, -v.z, v.y], [v.z, z, -v.x], [-v.y, v.x, z]],
        }
    }

    /// Rodrigues form of `exp(angle · [axis]×)`.
    pub fn about_unit_axis(axis: UnitVec3<T>, angle: T) -> Self {
        let a = axis.get();
        let (s, c) = angle.sin_cos();
        let v = T::one() - c;
        let (x, y, z) = (a.x, a.y, a.z);
        Self {
            m: [
                [c + x * x * v, x * y * v - z * s, x * z * v + y * s],
                [y * x * v + z * s, c + y * y * v, y * z * v - x * s],
                [z * x * v - y * s, z * y * v + x * s, c + z * z * v],
            ],
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.m[row][col]
    }

    pub fn rows(&self) -> [[T; 3]; 3] {
        self.m
    }

    pub fn column(&self, col: usize) -> Vec3<T> {
        Vec3::new(self.m[0][col], self.m[1][col], self.m[2][col])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.m;
        Self {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    pub fn apply(&self, v: Vec3<T>) -> Vec3<T> {
        let m = &self.m;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    pub fn determinant(&self) -> T {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> T {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = out.m[i][j] + other.m[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = *self;
        for row in out.m.iter_mut() {
            for v in row.iter_mut() {
                *v = *v * s;
            }
        }
        out
    }

    /// Frobenius norm of `self - other`.
    pub fn frobenius_distance(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                let d = self.m[i][j] - other.m[i][j];
                acc = acc + d * d;
            }
        }
        acc.sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc = acc.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        acc
    }

    /// Largest entrywise deviation of `MᵀM` from the identity.
    pub fn orthonormality_error(&self) -> T {
        (self.transpose() * *self).max_abs_diff(&Self::identity())
    }

    /// True when columns are orthonormal and the determinant is +1, both within `tol`.
    pub fn is_proper(&self, tol: T) -> bool {
        self.orthonormality_error() <= tol && (self.determinant() - T::one()).abs() <= tol
    }

    /// Re-orthonormalizes by modified Gram–Schmidt on the first two columns;
    /// the third column is rebuilt as their cross product.
    pub fn orthonormalized(&self) -> Result<Self> {
        let eps = T::tol(1e-12);
        let x = UnitVec3::normalize(self.column(0), eps)
            .ok_or_else(|| Error::InvalidInput("first column vanishes".into()))?;
        let t = self.column(1).reject_from(x);
        let t = UnitVec3::normalize(t, eps)
            .ok_or_else(|| Error::InvalidInput("columns are parallel".into()))?;
        let n = x.cross(t.get());
        Ok(Self::from_columns(x.get(), t.get(), n))
    }
}

impl<T: Real> Mul for Rot3<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.m, &rhs.m);
        let mut m = [[T::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        Self { m }
    }
}

impl<T: Real> Mul<Vec3<T>> for Rot3<T> {
    type Output = Vec3<T>;
    fn mul(self, v: Vec3<T>) -> Vec3<T> {
        self.apply(v)
    }
}

/// Proper rotation by `angle` about `axis`.
///
/// Fails with [`Error::InvalidInput`] when `axis` is not unit length to
/// within 1e-9.
pub fn rotation_about_axis<T: Real>(axis: Vec3<T>, angle: T) -> Result<Rot3<T>> {
    let n = axis.norm();
    if !n.is_finite() || (n - T::one()).abs() > T::tol(1e-9) {
        return Err(Error::InvalidInput(format!(
            "rotation axis must be unit length, norm is {}",
            n
        )));
    }
    Ok(Rot3::about_unit_axis(
        UnitVec3::new_unchecked(axis.scale(T::one() / n)),
        angle,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, TAU};

    #[test]
    fn zero_angle_is_identity() {
        let a = Vec3::new(0.0, 0.6, 0.8);
        let r = rotation_about_axis(a, 0.0).unwrap();
        assert_eq!(r, Rot3::identity());
    }

    #[test]
    fn quarter_turn_about_z() {
        let r = rotation_about_axis(Vec3::new(0.0, 0.0, 1.0), FRAC_PI_2).unwrap();
        let v = r * Vec3::new(1.0, 0.0, 0.0);
        assert!(v.max_abs_diff(Vec3::new(0.0, 1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn full_turn_is_identity() {
        let a = Vec3::new(0.48, -0.6, 0.64);
        let r = rotation_about_axis(a, TAU).unwrap();
        assert!(r.max_abs_diff(&Rot3::identity()) < 1e-12);
    }

    #[test]
    fn non_unit_axis_rejected() {
        let err = rotation_about_axis(Vec3::new(0.0, 0.0, 1.1), 0.3).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn gram_schmidt_restores_frame() {
        let r = rotation_about_axis(Vec3::new(0.0, 0.6, 0.8), 1.1).unwrap();
        let mut rows = r.rows();
        rows[0][0] += 1e-7;
        rows[2][1] -= 1e-7;
        let fixed = Rot3::from_rows(rows).orthonormalized().unwrap();
        assert!(fixed.is_proper(1e-14));
        assert!(fixed.max_abs_diff(&r) < 1e-6);
    }
}
