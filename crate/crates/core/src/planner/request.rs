use crate::error::{Error, Result};
use crate::kinematics::{relative_rotation, Configuration, Rot3, TurnGeometry, UnitVec3, Vec3};
use crate::scalar::Real;

use super::catalog::{max_radius, BOUNDARY_BAND};

/// Relative tolerance on input poses.
pub const TOL_INPUT: f64 = 1e-6;
/// Deviations above this are repaired with a warning.
pub const TOL_SILENT: f64 = 1e-9;

/// A pose in physical coordinates: position on the sphere of radius
/// `sphere_radius` and the unit direction of travel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose<T> {
    pub position: Vec3<T>,
    pub tangent: Vec3<T>,
}

impl<T: Real> Pose<T> {
    pub fn new(position: Vec3<T>, tangent: Vec3<T>) -> Self {
        Self { position, tangent }
    }

    /// The physical pose of a unit-sphere configuration.
    pub fn from_configuration(c: &Configuration<T>, sphere_radius: T) -> Self {
        Self::new(c.position().scale(sphere_radius), c.tangent().get())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanRequest<T> {
    pub sphere_radius: T,
    pub turning_radius: T,
    pub initial: Pose<T>,
    pub final_: Pose<T>,
}

/// The request scaled onto the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitProblem<T> {
    pub target: Rot3<T>,
    pub geom: TurnGeometry<T>,
    pub initial: Configuration<T>,
    pub final_: Configuration<T>,
    pub warnings: Vec<String>,
}

impl<T: Real> PlanRequest<T> {
    pub fn unit_r(&self) -> T {
        self.turning_radius / self.sphere_radius
    }
}

fn unit_pose<T: Real>(pose: &Pose<T>, sphere_radius: T, name: &str, warnings: &mut Vec<String>) -> Result<Configuration<T>> {
    let tol = T::lit(TOL_INPUT);
    let silent = T::lit(TOL_SILENT);
    let bad = |what: String| Error::MalformedConfiguration(format!("{name}.{what}"));

    let p = pose.position.scale(T::one() / sphere_radius);
    let pn = p.norm();
    if !pn.is_finite() || (pn - T::one()).abs() > tol {
        return Err(bad(format!("position: norm {} differs from sphere_radius {}", pn * sphere_radius, sphere_radius)));
    }
    let tn = pose.tangent.norm();
    if !tn.is_finite() || (tn - T::one()).abs() > tol {
        return Err(bad(format!("tangent: norm {} is not 1", tn)));
    }
    let x = p.scale(T::one() / pn);
    let dot = x.dot(pose.tangent) / tn;
    if dot.abs() > tol {
        return Err(bad(format!("tangent: not orthogonal to position (cosine {})", dot)));
    }
    let worst = (pn - T::one()).abs().max((tn - T::one()).abs()).max(dot.abs());
    if worst > silent {
        warnings.push(format!(
            "{name}: re-orthonormalized pose deviating by {:e}",
            worst.to_f64_lossy()
        ));
    }
    let x = UnitVec3::normalize(x, T::tol(1e-12)).expect("non-zero position");
    let t = UnitVec3::normalize(pose.tangent.reject_from(x), T::tol(1e-12))
        .ok_or_else(|| bad("tangent: parallel to position".into()))?;
    Configuration::new(x, t)
}

/// Scales the request to the unit sphere and forms `M = R_iᵀ R_f`.
///
/// `best_effort` admits unit radii beyond the proven range (still below one).
pub fn normalize_request<T: Real>(req: &PlanRequest<T>, best_effort: bool) -> Result<UnitProblem<T>> {
    if !(req.sphere_radius > T::zero()) || !req.sphere_radius.is_finite() {
        return Err(Error::InvalidInput("sphere_radius must be positive".into()));
    }
    if !(req.turning_radius > T::zero()) || !req.turning_radius.is_finite() {
        return Err(Error::InvalidInput("turning_radius must be positive".into()));
    }
    let r = req.unit_r();
    let limit = max_radius::<T>() + T::lit(BOUNDARY_BAND);
    if r >= T::one() || (r > limit && !best_effort) {
        return Err(Error::RadiusOutOfRange { r: r.to_f64_lossy() });
    }
    let geom = TurnGeometry::from_radius(r).map_err(|_| Error::RadiusOutOfRange { r: r.to_f64_lossy() })?;
    let mut warnings = Vec::new();
    let initial = unit_pose(&req.initial, req.sphere_radius, "initial", &mut warnings)?;
    let final_ = unit_pose(&req.final_, req.sphere_radius, "final", &mut warnings)?;
    Ok(UnitProblem {
        target: relative_rotation(&initial, &final_),
        geom,
        initial,
        final_,
        warnings,
    })
}
