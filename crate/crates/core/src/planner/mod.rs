//! End-to-end planning between two physical poses.
//!
//! The request is scaled to the unit sphere, every family in the catalog
//! for the radius regime is solved against the relative rotation, and the
//! feasible, distinct candidates are ranked by length.

mod catalog;
mod request;

pub use catalog::{family_catalog, max_radius, regime_extras, CatalogMode, FamilyTemplate, BOUNDARY_BAND};
pub use request::{normalize_request, PlanRequest, Pose, UnitProblem, TOL_INPUT, TOL_SILENT};

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::kinematics::{compose_path, Rot3, Segment, SegmentKind, TurnGeometry};
use crate::linkage::{CandidateSolution, TOL_RESIDUAL};
use crate::scalar::Real;

/// Label attached to results planned beyond the proven radius range.
pub const HEURISTIC_LABEL: &str = "heuristic — outside proven sufficiency";
/// Per-angle tolerance for treating two candidates as the same path.
pub const TOL_DEDUPE: f64 = 1e-7;
/// Slack on the free-middle lower bound `π` and the `CC_πC` outer bound.
pub const TOL_BOUND: f64 = 1e-9;
/// Relative length difference below which candidates count as tied.
pub const TOL_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanOptions<T> {
    pub mode: CatalogMode,
    pub best_effort: bool,
    /// Residual bound a candidate must meet (never looser than the solver's).
    pub tol_residual: T,
}

impl<T: Real> Default for PlanOptions<T> {
    fn default() -> Self {
        Self {
            mode: CatalogMode::Table,
            best_effort: false,
            tol_residual: T::tol(TOL_RESIDUAL),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathCandidate<T> {
    pub family: String,
    pub catalog_index: usize,
    pub segments: Vec<Segment<T>>,
    pub unit_length: T,
    pub physical_length: T,
    pub residual: T,
}

impl<T: Real> PathCandidate<T> {
    /// Total turning angle over the `L`/`R` segments.
    pub fn turning(&self) -> T {
        self.segments
            .iter()
            .filter(|s| s.kind.is_turn())
            .fold(T::zero(), |a, s| a + s.angle())
    }

    /// Segment list with zero-angle segments removed and equal neighbours merged.
    pub fn reduced(&self) -> Vec<(SegmentKind, T)> {
        reduce(&self.segments)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult<T> {
    pub unit_r: T,
    pub sphere_radius: T,
    pub candidates: Vec<PathCandidate<T>>,
    pub best: usize,
    /// Set when the radius lies outside the proven range.
    pub label: Option<String>,
    pub warnings: Vec<String>,
    pub initial: crate::kinematics::Configuration<T>,
    pub target: Rot3<T>,
}

impl<T: Real> PlanResult<T> {
    pub fn best_candidate(&self) -> &PathCandidate<T> {
        &self.candidates[self.best]
    }

    /// Shortest candidate whose family satisfies `pred`.
    pub fn best_where(&self, pred: impl Fn(&PathCandidate<T>) -> bool) -> Option<&PathCandidate<T>> {
        let idx: Vec<usize> = (0..self.candidates.len())
            .filter(|&i| pred(&self.candidates[i]))
            .collect();
        pick_best(&self.candidates, &idx).map(|i| &self.candidates[i])
    }
}

fn reduce<T: Real>(segments: &[Segment<T>]) -> Vec<(SegmentKind, T)> {
    let mut out: Vec<(SegmentKind, T)> = Vec::new();
    for s in segments.iter().filter(|s| !s.is_degenerate()) {
        match out.last_mut() {
            Some((k, a)) if *k == s.kind => *a = *a + s.angle(),
            _ => out.push((s.kind, s.angle())),
        }
    }
    out
}

fn same_path<T: Real>(a: &[(SegmentKind, T)], b: &[(SegmentKind, T)]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x.0 == y.0 && (x.1 - y.1).abs() <= T::lit(TOL_DEDUPE))
}

fn lex_angles<T: Real>(a: &PathCandidate<T>, b: &PathCandidate<T>) -> Ordering {
    for (x, y) in a.segments.iter().zip(&b.segments) {
        match x.angle().partial_cmp(&y.angle()) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    a.segments.len().cmp(&b.segments.len())
}

/// Whether `a` ranks strictly ahead of `b`.
fn ranks_before<T: Real>(a: &PathCandidate<T>, b: &PathCandidate<T>) -> bool {
    let scale = T::one().max(a.physical_length.abs()).max(b.physical_length.abs());
    if (a.physical_length - b.physical_length).abs() > T::lit(TOL_TIE) * scale {
        return a.physical_length < b.physical_length;
    }
    if a.catalog_index != b.catalog_index {
        return a.catalog_index < b.catalog_index;
    }
    match a.turning().partial_cmp(&b.turning()) {
        Some(Ordering::Less) => return true,
        Some(Ordering::Greater) => return false,
        _ => {}
    }
    lex_angles(a, b) == Ordering::Less
}

fn pick_best<T: Real>(cands: &[PathCandidate<T>], idx: &[usize]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for &i in idx {
        best = match best {
            None => Some(i),
            Some(b) if ranks_before(&cands[i], &cands[b]) => Some(i),
            keep => keep,
        };
    }
    best
}

fn feasible<T: Real>(fam: &FamilyTemplate<T>, sol: &CandidateSolution<T>) -> bool {
    let pi = T::PI();
    let slack = T::lit(TOL_BOUND);
    if fam.is_free_ccc() && sol.angles[1] < pi - slack {
        return false;
    }
    if fam.is_fixed_pi() && (sol.angles[0] > pi + slack || sol.angles[2] > pi + slack) {
        return false;
    }
    sol.angles.iter().all(|&a| a >= T::zero())
}

/// Solves every family of the catalog against `target` and returns the
/// feasible, deduplicated candidates in catalog order.
pub fn solve_catalog<T: Real>(
    target: &Rot3<T>,
    geom: &TurnGeometry<T>,
    catalog: &[FamilyTemplate<T>],
    sphere_radius: T,
    tol_residual: T,
) -> Vec<PathCandidate<T>> {
    // (candidate, reduced path, priority)
    // candidate, reduced segment sequence, family priority
    let mut kept: Vec<Kept<T>> = Vec::new();
    for (index, fam) in catalog.iter().enumerate() {
        for sol in fam.problem(*target, *geom).solve() {
            if !feasible(fam, &sol) {
                continue;
            }
            let segments = sol.segments();
            let residual = compose_path(&segments, geom).frobenius_distance(target);
            if residual > tol_residual.min(T::tol(TOL_RESIDUAL)) {
                continue;
            }
            let unit_length = sol.unit_length(geom);
            let cand = PathCandidate {
                family: fam.tag.clone(),
                catalog_index: index,
                segments,
                unit_length,
                physical_length: unit_length * sphere_radius,
                residual,
            };
            let red = cand.reduced();
            match kept.iter().position(|(_, r, _)| same_path(r, &red)) {
                Some(j) if kept[j].2 < fam.priority => kept[j] = (cand, red, fam.priority),
                Some(_) => {}
                None => kept.push((cand, red, fam.priority)),
            }
        }
    }
    let mut out: Vec<PathCandidate<T>> = kept.into_iter().map(|(c, _, _)| c).collect();
    out.sort_by_key(|c| c.catalog_index);
    out
}

type Kept<T> = (PathCandidate<T>, Vec<(SegmentKind, T)>, u8);

/// Plans the shortest candidate path for `req`.
pub fn plan<T: Real>(req: &PlanRequest<T>, options: &PlanOptions<T>) -> Result<PlanResult<T>> {
    let unit = normalize_request(req, options.best_effort)?;
    let r = unit.geom.r();
    let beyond = r > max_radius::<T>() + T::lit(BOUNDARY_BAND);
    let mode = if beyond { CatalogMode::All } else { options.mode };
    let catalog = family_catalog(r, mode)?;
    let candidates = solve_catalog(&unit.target, &unit.geom, &catalog, req.sphere_radius, options.tol_residual);
    let all: Vec<usize> = (0..candidates.len()).collect();
    let best = pick_best(&candidates, &all).ok_or(Error::NoCandidateFound)?;
    Ok(PlanResult {
        unit_r: r,
        sphere_radius: req.sphere_radius,
        candidates,
        best,
        label: beyond.then(|| HEURISTIC_LABEL.to_string()),
        warnings: unit.warnings,
        initial: unit.initial,
        target: unit.target,
    })
}
