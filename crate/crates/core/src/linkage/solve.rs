use super::roots::{golden_min, scan_roots};
use super::{CandidateSolution, N_GRID, TOL_RESIDUAL, TOL_SCALAR, TOL_SYM};
use crate::error::Error;
use crate::kinematics::{
    align_angle, canonical_angle, compose_raw, segment_rotation, Rot3, SegmentKind, TurnGeometry,
    UnitVec3, TOL_ALIGN,
};
use crate::scalar::Real;

/// Residual band in which a near-miss root is polished instead of dropped.
const POLISH_BAND: f64 = 1e-5;

/// Extra constraints on a three-segment decomposition.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ThreeOptions<T> {
    pub fixed_middle: Option<T>,
    pub equal_outer: bool,
}

/// Coefficients `(K₁, K₂, K₃, rhs)` of `a₁·R₂(φ)a₃ = K₁ + K₂cos φ + K₃sin φ`
/// and the value `a₁·M a₃` that it must equal.
pub fn scalar_reduction<T: Real>(
    a1: UnitVec3<T>,
    a2: UnitVec3<T>,
    a3: UnitVec3<T>,
    target: &Rot3<T>,
) -> (T, T, T, T) {
    let k1 = a1.dot(a2.get()) * a2.dot(a3.get());
    let k2 = a1.dot(a3.get()) - k1;
    let k3 = a1.dot(a2.cross(a3.get()));
    let rhs = a1.dot(target.apply(a3.get()));
    (k1, k2, k3, rhs)
}

/// Angle of segment `idx` minimising the Frobenius residual with all other
/// angles held fixed.
///
/// The residual is affine in `(1, sin θ, cos θ)`, so the minimiser is exact.
pub fn best_single_angle<T: Real>(
    kinds: &[SegmentKind],
    angles: &[T],
    idx: usize,
    target: &Rot3<T>,
    geom: &TurnGeometry<T>,
) -> T {
    let before = compose_raw(&kinds[..idx], &angles[..idx], geom);
    let after = compose_raw(&kinds[idx + 1..], &angles[idx + 1..], geom);
    let w = after * target.transpose() * before;
    let k = Rot3::skew(geom.axis(kinds[idx]).get());
    let a = (w * k).trace();
    let b = (w * k * k).trace();
    if a.abs() + b.abs() < T::epsilon() {
        return angles[idx];
    }
    canonical_angle(a.atan2(-b))
}

/// Cyclic exact coordinate descent over the angles flagged in `free`.
pub fn polish_free_angles<T: Real>(
    kinds: &[SegmentKind],
    angles: &mut [T],
    free: &[bool],
    target: &Rot3<T>,
    geom: &TurnGeometry<T>,
    sweeps: usize,
) {
    for _ in 0..sweeps {
        for i in 0..kinds.len() {
            if free[i] {
                angles[i] = best_single_angle(kinds, angles, i, target, geom);
            }
        }
    }
}

fn accepted<T: Real>(s: &CandidateSolution<T>) -> bool {
    s.residual <= T::tol(TOL_RESIDUAL)
}

/// Single segment: `M` must be a rotation about the segment axis.
pub fn solve_one<T: Real>(
    target: &Rot3<T>,
    kind: SegmentKind,
    geom: &TurnGeometry<T>,
) -> Option<CandidateSolution<T>> {
    let a = geom.axis(kind);
    if (target.apply(a.get()) - a.get()).norm() > T::tol(TOL_ALIGN) {
        return None;
    }
    let p = a.any_orthogonal().get();
    let phi = align_angle(a, p, target.apply(p)).ok()?;
    let s = CandidateSolution::build(&[kind], vec![phi], target, geom, "");
    accepted(&s).then_some(s)
}

/// Two segments: `R₁(α)R₂(γ) = M`.
pub fn solve_two<T: Real>(
    target: &Rot3<T>,
    kinds: (SegmentKind, SegmentKind),
    geom: &TurnGeometry<T>,
) -> Vec<CandidateSolution<T>> {
    let (a1, a2) = (geom.axis(kinds.0), geom.axis(kinds.1));
    let ma2 = target.apply(a2.get());
    if (a1.dot(ma2) - a1.dot(a2.get())).abs() > T::tol(TOL_SCALAR) {
        return vec![];
    }
    let alpha = align_angle(a1, a2.get(), ma2);
    let gamma = align_angle(a2, target.transpose().apply(a1.get()), a1.get());
    let (Ok(alpha), Ok(gamma)) = (alpha, gamma) else {
        return vec![];
    };
    let ks = [kinds.0, kinds.1];
    let mut s = CandidateSolution::build(&ks, vec![alpha, gamma], target, geom, "");
    if !accepted(&s) && s.residual <= T::lit(POLISH_BAND) {
        polish_free_angles(&ks, &mut s.angles, &[true, true], target, geom, 8);
        s = CandidateSolution::build(&ks, s.angles, target, geom, "");
    }
    if accepted(&s) {
        vec![s]
    } else {
        vec![]
    }
}

/// Recovers the outer angles of `R_f(α) B R_l(γ) = M` for a known interior
/// product `B`. A degenerate probe leaves a one-parameter family; the first
/// angle is then pinned to zero.
fn outer_angles<T: Real>(
    target: &Rot3<T>,
    af: UnitVec3<T>,
    inner: &Rot3<T>,
    al: UnitVec3<T>,
    hint: UnitVec3<T>,
) -> Option<(T, T)> {
    let first = align_angle(af, inner.apply(al.get()), target.apply(al.get()));
    let alpha = match first {
        Ok(a) => a,
        Err(Error::DegenerateAlignment) => T::zero(),
        Err(_) => return None,
    };
    let last = align_angle(al, target.transpose().apply(af.get()), inner.transpose().apply(af.get()));
    let gamma = match last {
        Ok(g) if first.is_ok() => g,
        Ok(_) | Err(Error::DegenerateAlignment) => {
            // rest = R_l(γ) once α is fixed; probe with a vector off the axis
            let head = Rot3::about_unit_axis(af, alpha) * *inner;
            let rest = head.transpose() * *target;
            let p = secondary_probe(al, hint).get();
            align_angle(al, p, rest.apply(p)).ok()?
        }
        Err(_) => return None,
    };
    Some((alpha, gamma))
}

/// Unit vector off `axis`: the normalized part of `hint` orthogonal to it,
/// else that of `e₂`, else any orthogonal direction.
fn secondary_probe<T: Real>(axis: UnitVec3<T>, hint: UnitVec3<T>) -> UnitVec3<T> {
    let eps = T::tol(1e-7);
    UnitVec3::normalize(hint.reject_from(axis), eps)
        .or_else(|| UnitVec3::normalize(UnitVec3::<T>::e2().reject_from(axis), eps))
        .unwrap_or_else(|| axis.any_orthogonal())
}

/// Roots in `[0, 2π)` of `K₁ + K₂cos φ + K₃sin φ = rhs`.
pub fn middle_angle_roots<T: Real>(k1: T, k2: T, k3: T, rhs: T) -> Vec<T> {
    let rho = k2.hypot(k3);
    if rho < T::tol(1e-14) {
        return if (rhs - k1).abs() <= T::tol(TOL_SCALAR) {
            vec![T::zero()]
        } else {
            vec![]
        };
    }
    let c = (rhs - k1) / rho;
    if c.abs() > T::one() + T::tol(TOL_SCALAR) / rho {
        return vec![];
    }
    let c = c.max(-T::one()).min(T::one());
    let psi = k3.atan2(k2);
    let d = c.acos();
    let p = canonical_angle(psi + d);
    let q = canonical_angle(psi - d);
    if (p - q).abs() < T::tol(1e-12) || (p - q).abs() > T::tau() - T::tol(1e-12) {
        vec![p]
    } else {
        vec![p, q]
    }
}

/// Three segments: `R₁(φ₁)R₂(φ₂)R₃(φ₃) = M`.
pub fn solve_three<T: Real>(
    target: &Rot3<T>,
    kinds: (SegmentKind, SegmentKind, SegmentKind),
    geom: &TurnGeometry<T>,
    opts: ThreeOptions<T>,
) -> Vec<CandidateSolution<T>> {
    let ks = [kinds.0, kinds.1, kinds.2];
    let (a1, a2, a3) = (geom.axis(ks[0]), geom.axis(ks[1]), geom.axis(ks[2]));
    let (k1, k2, k3, rhs) = scalar_reduction(a1, a2, a3, target);
    let middles = match opts.fixed_middle {
        Some(v) => {
            if (k1 + k2 * v.cos() + k3 * v.sin() - rhs).abs() <= T::tol(TOL_SCALAR) {
                vec![v]
            } else {
                vec![]
            }
        }
        None => middle_angle_roots(k1, k2, k3, rhs),
    };

    let attempt = |mid: T| -> Option<CandidateSolution<T>> {
        let inner = segment_rotation(ks[1], mid, geom);
        let (p1, p3) = outer_angles(target, a1, &inner, a3, a2)?;
        Some(CandidateSolution::build(&ks, vec![p1, mid, p3], target, geom, ""))
    };
    let residual_at = |mid: T| attempt(mid).map_or(T::infinity(), |s| s.residual);

    let mut out: Vec<CandidateSolution<T>> = Vec::new();
    for mid in middles {
        let Some(mut s) = attempt(mid) else { continue };
        if !accepted(&s) && s.residual <= T::lit(POLISH_BAND) {
            let mut free = [true, true, true];
            if opts.fixed_middle.is_none() {
                let w = T::lit(1e-4);
                let (m2, r2) = golden_min(&residual_at, mid - w, mid + w, T::tol(1e-15));
                if r2 < s.residual {
                    if let Some(better) = attempt(canonical_angle(m2)) {
                        s = better;
                    }
                }
            } else {
                free[1] = false;
            }
            if !accepted(&s) {
                let mut angles = s.angles.clone();
                polish_free_angles(&ks, &mut angles, &free, target, geom, 8);
                s = CandidateSolution::build(&ks, angles, target, geom, "");
            }
        }
        if !accepted(&s) {
            continue;
        }
        if opts.equal_outer && !outer_match(s.angles[0], s.angles[2]) {
            continue;
        }
        if !out.iter().any(|o| same_angles(&o.angles, &s.angles)) {
            out.push(s);
        }
    }
    out
}

fn outer_match<T: Real>(a: T, b: T) -> bool {
    let d = (a - b).abs();
    d <= T::tol(TOL_SYM) || (T::tau() - d) <= T::tol(TOL_SYM)
}

fn same_angles<T: Real>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(&x, &y)| outer_match(x, y))
}

/// Four or five alternating turns whose interior angles all equal `π + β`
/// with `β ∈ (0, π)`, and whose outer angles do not exceed `π + β`.
pub fn solve_equal_middle<T: Real>(
    target: &Rot3<T>,
    kinds: &[SegmentKind],
    geom: &TurnGeometry<T>,
) -> Vec<CandidateSolution<T>> {
    let n = kinds.len();
    assert!(n >= 3, "equal-middle patterns need interior segments");
    let af = geom.axis(kinds[0]);
    let al = geom.axis(kinds[n - 1]);
    let interior = &kinds[1..n - 1];
    let inner_at = |beta: T| {
        let angles = vec![T::PI() + beta; interior.len()];
        compose_raw(interior, &angles, geom)
    };
    let lhs = af.dot(target.apply(al.get()));
    let g = |beta: T| af.dot(inner_at(beta).apply(al.get())) - lhs;

    let attempt = |beta: T| -> Option<CandidateSolution<T>> {
        let inner = inner_at(beta);
        let (alpha, gamma) = outer_angles(target, af, &inner, al, geom.axis(interior[0]))?;
        let mut angles = vec![alpha];
        angles.extend(std::iter::repeat_n(T::PI() + beta, interior.len()));
        angles.push(gamma);
        Some(CandidateSolution::build(kinds, angles, target, geom, ""))
    };
    let residual_at = |beta: T| attempt(beta).map_or(T::infinity(), |s| s.residual);

    let roots = scan_roots(g, T::zero(), T::PI(), N_GRID, T::tol(1e-12), T::tol(1e-6));
    let mut out: Vec<CandidateSolution<T>> = Vec::new();
    for root in roots {
        let mut beta = root.x;
        let Some(mut s) = attempt(beta) else { continue };
        if !accepted(&s) && s.residual <= T::lit(POLISH_BAND) {
            let w = T::lit(1e-4);
            let lo = (beta - w).max(T::zero());
            let hi = (beta + w).min(T::PI());
            let (b2, r2) = golden_min(&residual_at, lo, hi, T::tol(1e-15));
            if r2 < s.residual {
                if let Some(better) = attempt(b2) {
                    beta = b2;
                    s = better;
                }
            }
            if !accepted(&s) {
                let mut free = vec![false; n];
                free[0] = true;
                free[n - 1] = true;
                let mut angles = s.angles.clone();
                polish_free_angles(kinds, &mut angles, &free, target, geom, 8);
                s = CandidateSolution::build(kinds, angles, target, geom, "");
            }
        }
        if !accepted(&s) || beta <= T::zero() || beta >= T::PI() {
            continue;
        }
        let cap = T::PI() + beta + T::tol(1e-9);
        if s.angles[0] > cap || s.angles[n - 1] > cap {
            continue;
        }
        if !out.iter().any(|o| same_angles(&o.angles, &s.angles)) {
            out.push(s);
        }
    }
    out
}
