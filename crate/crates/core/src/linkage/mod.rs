//! Inversion of products of fixed-axis rotations.
//!
//! Every candidate path family is a product `R_{k₁}(φ₁)⋯R_{kₙ}(φₙ)` of
//! rotations about known axes. Given a target rotation `M` and the axis
//! pattern, the solvers here return every angle assignment that reproduces
//! `M`, each verified against the full matrix.

mod roots;
mod solve;

pub use roots::{bisect, golden_min, scan_roots, ScalarRoot};
pub use solve::{
    best_single_angle, middle_angle_roots, polish_free_angles, scalar_reduction, solve_equal_middle, solve_one,
    solve_three, solve_two, ThreeOptions,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::kinematics::{compose_raw, Rot3, Segment, SegmentKind, TurnGeometry};
use crate::scalar::Real;

/// Full-matrix residual bound for an accepted solution (Frobenius norm).
pub const TOL_RESIDUAL: f64 = 1e-9;
/// Tolerance on scalar consistency conditions.
pub const TOL_SCALAR: f64 = 1e-8;
/// Tolerance on equality of outer angles for symmetric families.
pub const TOL_SYM: f64 = 1e-7;
/// Scan resolution for the equal-middle-angle root search.
pub const N_GRID: usize = 4001;

/// Constraint on the interior segment angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MiddleConstraint<T> {
    Free,
    /// Middle angle of a three-segment pattern pinned to a value.
    Fixed(T),
    /// All interior turns share the angle `π + β`, `β ∈ (0, π)`.
    EqualOffset,
}

/// A target rotation and the pattern of rotations to decompose it into.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkageProblem<T> {
    pub target: Rot3<T>,
    pub kinds: Vec<SegmentKind>,
    pub middle: MiddleConstraint<T>,
    pub equal_outer: bool,
    pub geom: TurnGeometry<T>,
}

/// One angle assignment reproducing the target.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSolution<T> {
    pub kinds: Vec<SegmentKind>,
    pub angles: Vec<T>,
    pub residual: T,
    pub family_tag: String,
}

impl<T: Real> CandidateSolution<T> {
    pub(crate) fn build(kinds: &[SegmentKind], angles: Vec<T>, target: &Rot3<T>, geom: &TurnGeometry<T>, tag: &str) -> Self {
        let residual = compose_raw(kinds, &angles, geom).frobenius_distance(target);
        Self {
            kinds: kinds.to_vec(),
            angles,
            residual,
            family_tag: tag.to_string(),
        }
    }

    /// Residual recomputed from the stored angles.
    pub fn recompute_residual(&self, target: &Rot3<T>, geom: &TurnGeometry<T>) -> T {
        compose_raw(&self.kinds, &self.angles, geom).frobenius_distance(target)
    }

    pub fn segments(&self) -> Vec<Segment<T>> {
        self.kinds
            .iter()
            .zip(&self.angles)
            .map(|(&k, &a)| Segment::new(k, a))
            .collect()
    }

    pub fn unit_length(&self, geom: &TurnGeometry<T>) -> T {
        self.segments()
            .iter()
            .fold(T::zero(), |acc, s| acc + s.unit_length(geom))
    }
}

/// Tag such as `LGL`, `RLpiR` or `LRLRL`; `empty` for the zero-segment path.
pub fn family_tag<T: Real>(kinds: &[SegmentKind], middle: &MiddleConstraint<T>) -> String {
    if kinds.is_empty() {
        return "empty".to_string();
    }
    let mut out = String::new();
    for (i, k) in kinds.iter().enumerate() {
        out.push(k.letter());
        if i == 1 && kinds.len() == 3 {
            if let MiddleConstraint::Fixed(v) = middle {
                if (*v - T::PI()).abs() < T::tol(1e-12) {
                    out.push_str("pi");
                } else {
                    out.push_str(&format!("[{}]", v));
                }
            }
        }
    }
    out
}

impl<T: Real> LinkageProblem<T> {
    pub fn new(
        target: Rot3<T>,
        kinds: Vec<SegmentKind>,
        middle: MiddleConstraint<T>,
        equal_outer: bool,
        geom: TurnGeometry<T>,
    ) -> Result<Self> {
        validate_pattern(&kinds, &middle)?;
        Ok(Self {
            target,
            kinds,
            middle,
            equal_outer,
            geom,
        })
    }

    pub fn family_tag(&self) -> String {
        family_tag(&self.kinds, &self.middle)
    }

    /// Every residual-verified angle assignment for this pattern.
    pub fn solve(&self) -> Vec<CandidateSolution<T>> {
        let tag = self.family_tag();
        let m = &self.target;
        let g = &self.geom;
        let mut sols = match self.kinds.len() {
            0 => {
                let s = CandidateSolution::build(&[], Vec::new(), m, g, &tag);
                if s.residual <= T::tol(TOL_RESIDUAL) {
                    vec![s]
                } else {
                    vec![]
                }
            }
            1 => solve_one(m, self.kinds[0], g).into_iter().collect(),
            2 => solve_two(m, (self.kinds[0], self.kinds[1]), g),
            3 => {
                let opts = ThreeOptions {
                    fixed_middle: match self.middle {
                        MiddleConstraint::Fixed(v) => Some(v),
                        _ => None,
                    },
                    equal_outer: self.equal_outer,
                };
                solve_three(m, (self.kinds[0], self.kinds[1], self.kinds[2]), g, opts)
            }
            _ => solve_equal_middle(m, &self.kinds, g),
        };
        for s in &mut sols {
            s.family_tag = tag.clone();
        }
        sols
    }
}

fn validate_pattern<T: Real>(kinds: &[SegmentKind], middle: &MiddleConstraint<T>) -> Result<()> {
    if kinds.len() > 5 {
        return Err(Error::InvalidInput(format!(
            "at most five segments are supported, got {}",
            kinds.len()
        )));
    }
    if let Some(w) = kinds.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput(format!(
            "consecutive segments of the same kind ({}{})",
            w[0], w[1]
        )));
    }
    match middle {
        MiddleConstraint::Fixed(_) if kinds.len() != 3 => Err(Error::InvalidInput(
            "a fixed middle angle needs exactly three segments".into(),
        )),
        MiddleConstraint::EqualOffset => {
            if !(kinds.len() == 4 || kinds.len() == 5) || kinds.iter().any(|k| !k.is_turn()) {
                Err(Error::InvalidInput(
                    "equal middle angles need four or five alternating turns".into(),
                ))
            } else {
                Ok(())
            }
        }
        _ if kinds.len() >= 4 => Err(Error::InvalidInput(
            "four- and five-segment patterns need equal middle angles".into(),
        )),
        _ => Ok(()),
    }
}

impl<T: Real> fmt::Display for CandidateSolution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.family_tag)?;
        for (i, a) in self.angles.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", a)?;
        }
        write!(f, "] residual {:e}", self.residual.to_f64_lossy())
    }
}
