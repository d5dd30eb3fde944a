use super::rotation::Rot3;
use super::vector::{UnitVec3, Vec3};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Position on the unit sphere together with the unit tangent of travel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Configuration<T> {
    position: UnitVec3<T>,
    tangent: UnitVec3<T>,
}

impl<T: Real> Configuration<T> {
    /// Requires `position · tangent = 0` within 1e-10.
    pub fn new(position: UnitVec3<T>, tangent: UnitVec3<T>) -> Result<Self> {
        let d = position.dot(tangent.get());
        if d.abs() > T::tol(1e-10) {
            return Err(Error::MalformedConfiguration(format!(
                "tangent is not orthogonal to position (dot = {})",
                d
            )));
        }
        Ok(Self { position, tangent })
    }

    /// The start frame `X = e₁`, `T = e₂`, `N = e₃`.
    pub fn canonical() -> Self {
        Self {
            position: UnitVec3::e1(),
            tangent: UnitVec3::e2(),
        }
    }

    /// Reads `X` and `T` from the first two columns of a proper rotation.
    pub fn from_frame(frame: &Rot3<T>) -> Result<Self> {
        let position = UnitVec3::new(frame.column(0))?;
        let tangent = UnitVec3::new(frame.column(1))?;
        Self::new(position, tangent)
    }

    pub fn position(&self) -> UnitVec3<T> {
        self.position
    }

    pub fn tangent(&self) -> UnitVec3<T> {
        self.tangent
    }

    /// `N = X × T`.
    pub fn normal(&self) -> Vec3<T> {
        self.position.cross(self.tangent.get())
    }

    /// The frame `[X T N]`.
    pub fn frame(&self) -> Rot3<T> {
        Rot3::from_columns(self.position.get(), self.tangent.get(), self.normal())
    }
}

/// Rotation `M` with `R_i · M = R_f`, i.e. `M = R_iᵀ R_f`.
pub fn relative_rotation<T: Real>(initial: &Configuration<T>, final_: &Configuration<T>) -> Rot3<T> {
    initial.frame().transpose() * final_.frame()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::segment::{segment_rotation, SegmentKind, TurnGeometry};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn normal_is_unit() {
        let c = Configuration::<f64>::canonical();
        assert!((c.normal().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_orthogonal_tangent_rejected() {
        let x = UnitVec3::e1();
        let t = UnitVec3::new(Vec3::new(0.6, 0.8, 0.0)).unwrap();
        assert!(Configuration::<f64>::new(x, t).is_err());
    }

    #[test]
    fn identical_configurations_give_identity() {
        let g = TurnGeometry::from_radius(0.5).unwrap();
        let frame = segment_rotation(SegmentKind::L, 1.3, &g);
        let c = Configuration::from_frame(&frame).unwrap();
        assert!(relative_rotation(&c, &c).max_abs_diff(&Rot3::identity()) < 1e-15);
    }

    #[test]
    fn relative_rotation_of_great_circle_step() {
        let g = TurnGeometry::from_radius(0.5).unwrap();
        let m = segment_rotation(SegmentKind::G, FRAC_PI_2, &g);
        let start = Configuration::canonical();
        let end = Configuration::from_frame(&m).unwrap();
        assert!(relative_rotation(&start, &end).max_abs_diff(&m) < 1e-15);
    }
}
