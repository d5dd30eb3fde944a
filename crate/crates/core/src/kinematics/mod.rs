//! Sabban-frame geometry on the unit sphere: vectors, rotations, segment
//! generators, path composition, sampling and lengths.

mod align;
mod frame;
mod rotation;
mod sample;
mod segment;
mod vector;

pub use align::{align_angle, EPS_PERP, TOL_ALIGN};
pub use frame::{relative_rotation, Configuration};
pub use rotation::{rotation_about_axis, Rot3};
pub use sample::{sample_path, PathSample};
pub use segment::{
    canonical_angle, compose_path, compose_raw, path_length, segment_rotation, Generator,
    Segment, SegmentKind, TurnGeometry, EPS_ANGLE,
};
pub use vector::{UnitVec3, Vec3};
