//! Independent upper-bound search and empirical sufficiency audits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use std::f64::consts::PI;

use crate::error::Result;
use crate::kinematics::{compose_raw, segment_rotation, Configuration, Rot3, Segment, SegmentKind, TurnGeometry};
use crate::linkage::{best_single_angle, MiddleConstraint};
use crate::planner::{
    family_catalog, plan, CatalogMode, FamilyTemplate, PlanOptions, PlanRequest, Pose,
};

/// Residual an oracle path must reach.
pub const TOL_ORACLE: f64 = 1e-8;

/// Rotation drawn uniformly from SO(3): a normalized four-component
/// Gaussian sample read as a unit quaternion.
pub fn random_rotation<R: Rng>(rng: &mut R) -> Rot3<f64> {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n < 1e-12 {
            continue;
        }
        let [w, x, y, z] = q.map(|v| v / n);
        return Rot3::from_rows([
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ]);
    }
}

/// Unit-sphere request from the canonical start to `canonical · target`.
pub fn request_for_target(target: &Rot3<f64>, r: f64) -> PlanRequest<f64> {
    let start = Configuration::canonical();
    let end = Configuration::from_frame(&(start.frame() * *target)).expect("rotation target");
    PlanRequest {
        sphere_radius: 1.0,
        turning_radius: r,
        initial: Pose::from_configuration(&start, 1.0),
        final_: Pose::from_configuration(&end, 1.0),
    }
}

/// Random instance `id` of a seeded family of instances.
pub fn random_instance(r: f64, seed: u64, id: u64) -> PlanRequest<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(id));
    request_for_target(&random_rotation(&mut rng), r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditRow {
    pub table_min: f64,
    pub all_min: f64,
    /// `table_min − all_min`, positive when an audit family was shorter.
    pub gap: f64,
    pub best_is_fixed_middle: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub rows: Vec<AuditRow>,
    pub max_gap: f64,
    /// Instances whose table-mode best has a pinned `π` middle arc.
    pub fixed_middle_hits: usize,
}

/// Compares the table and extended catalogs instance by instance.
pub fn cross_family_audit(requests: &[PlanRequest<f64>]) -> Result<AuditReport> {
    let table = PlanOptions::default();
    let all = PlanOptions { mode: CatalogMode::All, ..PlanOptions::default() };
    let mut rows = Vec::with_capacity(requests.len());
    for req in requests {
        let t = plan(req, &table)?;
        let a = plan(req, &all)?;
        let tb = t.best_candidate();
        let (tm, am) = (tb.unit_length, a.best_candidate().unit_length);
        rows.push(AuditRow {
            table_min: tm,
            all_min: am,
            gap: tm - am,
            best_is_fixed_middle: tb.family.contains("pi"),
        });
    }
    let max_gap = rows.iter().map(|r| r.gap).fold(0.0, f64::max);
    let fixed_middle_hits = rows.iter().filter(|r| r.best_is_fixed_middle).count();
    Ok(AuditReport { rows, max_gap, fixed_middle_hits })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleHit {
    pub family: String,
    pub segments: Vec<Segment<f64>>,
    pub unit_length: f64,
    pub residual: f64,
}

/// How each segment angle depends on the search parameters.
#[derive(Debug, Clone, Copy)]
enum Slot {
    Fixed(f64),
    /// `offset + params[index]`.
    Param(usize, f64),
}

#[derive(Debug, Clone)]
struct Parameterization {
    tag: String,
    kinds: Vec<SegmentKind>,
    slots: Vec<Slot>,
    /// Box bounds per parameter; `None` marks a periodic angle.
    bounds: Vec<Option<(f64, f64)>>,
    /// Parameters controlling a single segment, minimised exactly.
    single: Vec<bool>,
    /// Outer angles capped at `π + β` (equal-middle chains).
    capped_outer: Option<usize>,
}

impl Parameterization {
    fn from_template(t: &FamilyTemplate<f64>) -> Self {
        let n = t.kinds.len();
        let mut slots = Vec::with_capacity(n);
        let mut bounds = Vec::new();
        let mut single = Vec::new();
        let mut capped_outer = None;
        match t.middle {
            MiddleConstraint::EqualOffset => {
                // params: outer first, β, outer last
                slots.push(Slot::Param(0, 0.0));
                for _ in 1..n - 1 {
                    slots.push(Slot::Param(1, PI));
                }
                slots.push(Slot::Param(2, 0.0));
                bounds = vec![Some((0.0, 2.0 * PI)), Some((0.0, PI)), Some((0.0, 2.0 * PI))];
                single = vec![true, false, true];
                capped_outer = Some(1);
            }
            MiddleConstraint::Fixed(v) => {
                slots = vec![Slot::Param(0, 0.0), Slot::Fixed(v), Slot::Param(1, 0.0)];
                bounds = vec![Some((0.0, PI)), Some((0.0, PI))];
                single = vec![true, true];
            }
            MiddleConstraint::Free => {
                let ccc = n == 3 && t.kinds.iter().all(|k| k.is_turn());
                for i in 0..n {
                    slots.push(Slot::Param(i, 0.0));
                    bounds.push(if ccc && i == 1 { Some((PI, 2.0 * PI)) } else { None });
                    single.push(true);
                }
            }
        }
        Self { tag: t.tag.clone(), kinds: t.kinds.clone(), slots, bounds, single, capped_outer }
    }

    fn angles(&self, p: &[f64]) -> Vec<f64> {
        self.slots
            .iter()
            .map(|s| match *s {
                Slot::Fixed(v) => v,
                Slot::Param(i, off) => off + p[i],
            })
            .collect()
    }

    fn project(&self, p: &mut [f64]) {
        for (i, b) in self.bounds.iter().enumerate() {
            p[i] = match b {
                Some((lo, hi)) => p[i].clamp(*lo, *hi),
                None => p[i].rem_euclid(2.0 * PI),
            };
        }
        if let Some(bi) = self.capped_outer {
            let cap = PI + p[bi];
            for (j, v) in p.iter_mut().enumerate() {
                if j != bi {
                    *v = v.min(cap);
                }
            }
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let mut p: Vec<f64> = self
            .bounds
            .iter()
            .map(|b| {
                let (lo, hi) = b.unwrap_or((0.0, 2.0 * PI));
                rng.random_range(lo..hi)
            })
            .collect();
        self.project(&mut p);
        p
    }

    fn segment_of(&self, param: usize) -> Option<usize> {
        self.slots
            .iter()
            .position(|s| matches!(s, Slot::Param(j, _) if *j == param))
    }
}

struct Search<'a> {
    target: &'a Rot3<f64>,
    geom: &'a TurnGeometry<f64>,
    evals: usize,
}

impl Search<'_> {
    fn residual(&mut self, fam: &Parameterization, p: &[f64]) -> f64 {
        self.evals += 1;
        compose_raw(&fam.kinds, &fam.angles(p), self.geom).frobenius_distance(self.target)
    }

    /// Exact single-coordinate minimisation over the independent angles.
    fn coordinate_sweep(&mut self, fam: &Parameterization, p: &mut [f64]) {
        for j in 0..p.len() {
            if !fam.single[j] {
                continue;
            }
            let Some(seg) = fam.segment_of(j) else { continue };
            let angles = fam.angles(p);
            self.evals += 1;
            let th = best_single_angle(&fam.kinds, &angles, seg, self.target, self.geom);
            let before = p[j];
            p[j] = th;
            fam.project(p);
            if self.residual(fam, p) > self.residual(fam, &{
                let mut q = p.to_vec();
                q[j] = before;
                q
            }) {
                p[j] = before;
            }
        }
    }

    /// Levenberg–Marquardt on the nine residual entries.
    fn refine(&mut self, fam: &Parameterization, p: &mut [f64], iters: usize) -> f64 {
        let n = p.len();
        let mut res = self.residual(fam, p);
        let mut mu = 1e-6;
        for _ in 0..iters {
            if res <= 1e-14 || n == 0 {
                break;
            }
            let angles = fam.angles(p);
            self.evals += n + 1;
            let base = compose_raw(&fam.kinds, &angles, self.geom);
            let err = flat(&base) .iter().zip(flat(self.target)).map(|(a, b)| a - b).collect::<Vec<_>>();
            let jac: Vec<[f64; 9]> = (0..n).map(|j| self.derivative(fam, &angles, j)).collect();
            let mut jtj = vec![vec![0.0; n]; n];
            let mut jte = vec![0.0; n];
            for a in 0..n {
                for b in 0..n {
                    jtj[a][b] = (0..9).map(|k| jac[a][k] * jac[b][k]).sum();
                }
                jte[a] = (0..9).map(|k| jac[a][k] * err[k]).sum();
            }
            let mut improved = false;
            for _ in 0..8 {
                let mut m = jtj.clone();
                for (a, row) in m.iter_mut().enumerate() {
                    row[a] += mu * (1.0 + jtj[a][a]);
                }
                let Some(step) = solve_small(m, jte.iter().map(|v| -v).collect()) else { break };
                let mut q: Vec<f64> = p.iter().zip(&step).map(|(a, b)| a + b).collect();
                fam.project(&mut q);
                let rq = self.residual(fam, &q);
                if rq < res {
                    p.copy_from_slice(&q);
                    res = rq;
                    mu = (mu * 0.1).max(1e-15);
                    improved = true;
                    break;
                }
                mu *= 10.0;
            }
            if !improved {
                break;
            }
        }
        res
    }

    fn derivative(&self, fam: &Parameterization, angles: &[f64], param: usize) -> [f64; 9] {
        let mut out = [0.0; 9];
        for (i, s) in fam.slots.iter().enumerate() {
            if !matches!(s, Slot::Param(j, _) if *j == param) {
                continue;
            }
            let before = compose_raw(&fam.kinds[..i], &angles[..i], self.geom);
            let after = compose_raw(&fam.kinds[i + 1..], &angles[i + 1..], self.geom);
            let k = Rot3::skew(self.geom.axis(fam.kinds[i]).get());
            let d = before * k * segment_rotation(fam.kinds[i], angles[i], self.geom) * after;
            for (o, v) in out.iter_mut().zip(flat(&d)) {
                *o += v;
            }
        }
        out
    }
}

fn flat(m: &Rot3<f64>) -> [f64; 9] {
    let r = m.rows();
    [r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2]]
}

/// Gaussian elimination with partial pivoting for tiny systems.
fn solve_small(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[piv][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, piv);
        b.swap(c, piv);
        let (top, below) = a.split_at_mut(c + 1);
        let pivot = &top[c];
        for (off, row) in below.iter_mut().enumerate() {
            let f = row[c] / pivot[c];
            for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= f * p;
            }
            b[c + 1 + off] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|k| a[c][k] * x[k]).sum();
        x[c] = (b[c] - s) / a[c][c];
    }
    Some(x)
}

/// Random-restart search over catalog-family angle vectors.
///
/// Each restart samples angles within the family's bounds, applies exact
/// coordinate descent and a Levenberg–Marquardt polish on the endpoint
/// residual, and keeps the shortest residual-passing path. `budget` caps
/// the number of residual evaluations.
pub fn forward_oracle(target: &Rot3<f64>, geom: &TurnGeometry<f64>, seed: u64, budget: usize) -> Option<OracleHit> {
    let families: Vec<Parameterization> = family_catalog(geom.r(), CatalogMode::All)
        .expect("extended catalog exists for every radius")
        .iter()
        .map(Parameterization::from_template)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut search = Search { target, geom, evals: 0 };
    let mut best: Option<OracleHit> = None;

    let consider = |fam: &Parameterization, p: &[f64], res: f64, best: &mut Option<OracleHit>| {
        if res > TOL_ORACLE {
            return;
        }
        let segments: Vec<Segment<f64>> = fam
            .kinds
            .iter()
            .zip(fam.angles(p))
            .map(|(&k, a)| Segment::new(k, a))
            .collect();
        let len: f64 = segments.iter().fold(0.0, |acc, s| acc + s.unit_length(geom));
        if best.as_ref().is_none_or(|b| len < b.unit_length) {
            *best = Some(OracleHit { family: fam.tag.clone(), segments, unit_length: len, residual: res });
        }
    };

    // parameter-free families need a single evaluation
    for fam in families.iter().filter(|f| f.bounds.is_empty()) {
        let res = search.residual(fam, &[]);
        consider(fam, &[], res, &mut best);
    }
    let searchable: Vec<&Parameterization> = families.iter().filter(|f| !f.bounds.is_empty()).collect();
    let mut k = 0usize;
    while search.evals < budget && !searchable.is_empty() {
        let fam = searchable[k % searchable.len()];
        k += 1;
        let mut p = fam.sample(&mut rng);
        for _ in 0..3 {
            search.coordinate_sweep(fam, &mut p);
        }
        let res = search.refine(fam, &mut p, 40);
        consider(fam, &p, res, &mut best);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::SegmentKind::*;

    #[test]
    fn identity_has_zero_length() {
        let g = TurnGeometry::from_radius(0.5).unwrap();
        let hit = forward_oracle(&Rot3::identity(), &g, 1, 100).unwrap();
        assert_eq!(hit.unit_length, 0.0);
    }

    #[test]
    fn random_rotation_is_proper() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            assert!(random_rotation(&mut rng).is_proper(1e-12));
        }
    }

    #[test]
    fn oracle_finds_short_lgl_path() {
        let g = TurnGeometry::from_radius(0.4).unwrap();
        let m = compose_raw(&[L, G, L], &[0.3, 0.5, 0.2], &g);
        let len = 0.4 * 0.5 + 0.5;
        let hit = forward_oracle(&m, &g, 11, 10_000).unwrap();
        assert!(hit.residual <= TOL_ORACLE);
        assert!(hit.unit_length <= len + 1e-3, "{hit:?}");
    }

    #[test]
    fn small_system_solver() {
        let x = solve_small(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
    }
}
