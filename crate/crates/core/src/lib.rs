//! Shortest curvature-constrained paths on a sphere.
//!
//! A vehicle moving on the unit sphere at constant speed with bounded
//! geodesic curvature follows tight left (`L`) and right (`R`) turns of
//! radius `r` and great-circle arcs (`G`). This crate composes such paths
//! exactly, inverts products of fixed-axis rotations to recover segment
//! angles, enumerates the candidate path families for each turning-radius
//! regime, and ships numerical checks for the extremal structure behind
//! those families.
//!
//! The geometry, solver and planner are generic over the scalar type; the
//! `d` / `f` suffixed aliases below fix it to `f64` / `f32`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod kinematics;
pub mod lab;
pub mod linkage;
pub mod planner;
pub mod scalar;

pub use error::{Error, Result};
pub use kinematics::{Configuration, Rot3, Segment, SegmentKind, TurnGeometry, UnitVec3, Vec3};
pub use scalar::Real;

pub type Vec3d = Vec3<f64>;
pub type UnitVec3d = UnitVec3<f64>;
pub type Rot3d = Rot3<f64>;
pub type Configurationd = Configuration<f64>;
pub type TurnGeometryd = TurnGeometry<f64>;
pub type Segmentd = Segment<f64>;
pub type PlanRequestd = planner::PlanRequest<f64>;
pub type PlanResultd = planner::PlanResult<f64>;

pub type Vec3f = Vec3<f32>;
pub type Rot3f = Rot3<f32>;
pub type TurnGeometryf = TurnGeometry<f32>;
pub type Segmentf = Segment<f32>;
