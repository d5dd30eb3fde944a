use super::segment::canonical_angle;
use super::vector::{UnitVec3, Vec3};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Maximum allowed difference of the axial components of the two vectors.
pub const TOL_ALIGN: f64 = 1e-7;
/// Minimum norm of the part of `v` orthogonal to the axis.
pub const EPS_PERP: f64 = 1e-7;

/// Angle `θ ∈ [0, 2π)` of the rotation about `axis` that carries `v` onto `w`.
pub fn align_angle<T: Real>(axis: UnitVec3<T>, v: Vec3<T>, w: Vec3<T>) -> Result<T> {
    let av = axis.dot(v);
    let aw = axis.dot(w);
    let gap = (av - aw).abs();
    if gap > T::tol(TOL_ALIGN) {
        return Err(Error::InconsistentPair(gap.to_f64_lossy()));
    }
    let vp = v.reject_from(axis);
    let wp = w.reject_from(axis);
    let eps = T::tol(EPS_PERP);
    if vp.norm() < eps || wp.norm() < eps {
        return Err(Error::DegenerateAlignment);
    }
    let sin = axis.dot(vp.cross(wp));
    let cos = vp.dot(wp);
    Ok(canonical_angle(sin.atan2(cos)))
}
