use std::fmt;

use super::rotation::Rot3;
use super::vector::{UnitVec3, Vec3};
use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Real};

/// Angles below this are treated as an absent segment.
pub const EPS_ANGLE: f64 = 1e-9;

/// Turn type of a path segment: tight left, tight right, or great circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SegmentKind {
    L,
    R,
    G,
}

impl SegmentKind {
    pub fn is_turn(self) -> bool {
        !matches!(self, SegmentKind::G)
    }

    pub fn letter(self) -> char {
        match self {
            SegmentKind::L => 'L',
            SegmentKind::R => 'R',
            SegmentKind::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'L' | 'l' => Some(SegmentKind::L),
            'R' | 'r' => Some(SegmentKind::R),
            'G' | 'g' => Some(SegmentKind::G),
            _ => None,
        }
    }
}

impl fmt::Display for SegmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A typed arc with its turn angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<T> {
    pub kind: SegmentKind,
    angle: T,
}

/// Wraps into `[0, 2π)` and snaps values within [`EPS_ANGLE`] of 0 or 2π to 0.
pub fn canonical_angle<T: Real>(angle: T) -> T {
    let a = wrap_angle(angle);
    let eps = T::lit(EPS_ANGLE);
    if a < eps || T::tau() - a < eps {
        T::zero()
    } else {
        a
    }
}

impl<T: Real> Segment<T> {
    pub fn new(kind: SegmentKind, angle: T) -> Self {
        Self {
            kind,
            angle: canonical_angle(angle),
        }
    }

    pub fn angle(&self) -> T {
        self.angle
    }

    pub fn is_degenerate(&self) -> bool {
        self.angle == T::zero()
    }

    /// Arc length on the unit sphere.
    pub fn unit_length(&self, geom: &TurnGeometry<T>) -> T {
        match self.kind {
            SegmentKind::G => self.angle,
            _ => geom.r() * self.angle,
        }
    }
}

impl<T: Real> fmt::Display for Segment<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.angle)
    }
}

/// Unit-sphere turning radius `r` and the matching curvature bound
/// `u_max`, related by `r = 1/√(1+u_max²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurnGeometry<T> {
    r: T,
    u_max: T,
}

impl<T: Real> TurnGeometry<T> {
    /// Accepts any `r` in `(0, 1)`. Whether `r` lies in a regime the
    /// planner can certify is checked by the planner, not here.
    pub fn from_radius(r: T) -> Result<Self> {
        if !(r > T::zero() && r < T::one()) {
            return Err(Error::InvalidInput(format!(
                "unit turning radius must lie in (0, 1), got {}",
                r
            )));
        }
        let u_max = (T::one() - r * r).sqrt() / r;
        Ok(Self { r, u_max })
    }

    pub fn from_u_max(u_max: T) -> Result<Self> {
        if !(u_max > T::zero() && u_max.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "curvature bound must be positive, got {}",
                u_max
            )));
        }
        let r = T::one() / (T::one() + u_max * u_max).sqrt();
        Ok(Self { r, u_max })
    }

    #[inline]
    pub fn r(&self) -> T {
        self.r
    }

    #[inline]
    pub fn u_max(&self) -> T {
        self.u_max
    }

    /// Rotation axis of a segment kind: `a_G = e₃`, `a_L = (√(1−r²), 0, r)`,
    /// `a_R = (−√(1−r²), 0, r)`.
    pub fn axis(&self, kind: SegmentKind) -> UnitVec3<T> {
        let s = (T::one() - self.r * self.r).sqrt();
        let v = match kind {
            SegmentKind::G => Vec3::new(T::zero(), T::zero(), T::one()),
            SegmentKind::L => Vec3::new(s, T::zero(), self.r),
            SegmentKind::R => Vec3::new(-s, T::zero(), self.r),
        };
        UnitVec3::new_unchecked(v)
    }

    pub fn generator(&self, kind: SegmentKind) -> Generator<T> {
        let axis = self.axis(kind);
        Generator {
            axis,
            skew: Rot3::skew(axis.get()),
        }
    }
}

/// Per-angle generator of a segment: `R_S(φ) = exp(Ω̂_S φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generator<T> {
    pub axis: UnitVec3<T>,
    pub skew: Rot3<T>,
}

/// Rotation accumulated along one segment.
pub fn segment_rotation<T: Real>(kind: SegmentKind, angle: T, geom: &TurnGeometry<T>) -> Rot3<T> {
    Rot3::about_unit_axis(geom.axis(kind), angle)
}

/// Net rotation of a path: segment rotations right-multiplied in traversal order.
pub fn compose_path<T: Real>(segments: &[Segment<T>], geom: &TurnGeometry<T>) -> Rot3<T> {
    segments.iter().fold(Rot3::identity(), |acc, s| {
        acc * segment_rotation(s.kind, s.angle(), geom)
    })
}

/// Same as [`compose_path`] for raw `(kind, angle)` pairs, without canonicalization.
pub fn compose_raw<T: Real>(kinds: &[SegmentKind], angles: &[T], geom: &TurnGeometry<T>) -> Rot3<T> {
    kinds
        .iter()
        .zip(angles)
        .fold(Rot3::identity(), |acc, (&k, &a)| acc * segment_rotation(k, a, geom))
}

/// Physical length of a path on a sphere of radius `sphere_radius`.
pub fn path_length<T: Real>(segments: &[Segment<T>], geom: &TurnGeometry<T>, sphere_radius: T) -> T {
    let unit = segments
        .iter()
        .fold(T::zero(), |acc, s| acc + s.unit_length(geom));
    sphere_radius * unit
}
