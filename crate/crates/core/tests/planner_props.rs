use std::collections::HashSet;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphere_dubins::kinematics::{compose_path, compose_raw};
use sphere_dubins::lab::{random_instance, request_for_target};
use sphere_dubins::linkage::MiddleConstraint;
use sphere_dubins::planner::{family_catalog, plan, CatalogMode, PlanOptions, PlanRequest, Pose};
use sphere_dubins::{PlanRequestd, TurnGeometry, TurnGeometryf};

#[test]
fn best_never_exceeds_generating_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let radii = [0.3, 0.5, 0.6, 0.71, 0.8];
    let opts = PlanOptions::default();
    for i in 0..500 {
        let r = radii[i % radii.len()];
        let g = TurnGeometry::from_radius(r).unwrap();
        let cat = family_catalog(r, CatalogMode::Table).unwrap();
        let fam = &cat[rng.random_range(0..cat.len())];
        let n = fam.kinds.len();
        let angles: Vec<f64> = match fam.middle {
            MiddleConstraint::EqualOffset => {
                let b = rng.random_range(0.01..PI - 0.01);
                let mut a = vec![rng.random_range(0.0..PI + b)];
                a.extend(std::iter::repeat_n(PI + b, n - 2));
                a.push(rng.random_range(0.0..PI + b));
                a
            }
            MiddleConstraint::Fixed(v) => vec![rng.random_range(0.0..PI), v, rng.random_range(0.0..PI)],
            MiddleConstraint::Free => (0..n)
                .map(|j| if fam.is_free_ccc() && j == 1 { rng.random_range(PI..TAU) } else { rng.random_range(0.0..TAU) })
                .collect(),
        };
        let gen_len: f64 = fam.kinds.iter().zip(&angles).map(|(k, a)| if k.is_turn() { r * a } else { *a }).sum();
        let m = compose_raw(&fam.kinds, &angles, &g);
        let res = plan(&request_for_target(&m, r), &opts).unwrap();
        assert!(res.best_candidate().unit_length <= gen_len + 1e-6, "{} {angles:?}", fam.tag);
    }
}

fn physical(req: &PlanRequestd, k: f64) -> PlanRequestd {
    let scale = |p: Pose<f64>| Pose::new(p.position.scale(k), p.tangent);
    PlanRequest {
        sphere_radius: req.sphere_radius * k,
        turning_radius: req.turning_radius * k,
        initial: scale(req.initial),
        final_: scale(req.final_),
    }
}

#[test]
fn best_path_reaches_final_frame() {
    let opts = PlanOptions::default();
    for id in 0..50 {
        let base = random_instance(0.6, 5, id);
        let req = physical(&base, 3.0);
        let res = plan(&req, &opts).unwrap();
        let b = res.best_candidate();
        let g = TurnGeometry::from_radius(res.unit_r).unwrap();
        let end = res.initial.frame() * compose_path(&b.segments, &g);
        let fin = Pose::new(end.column(0).scale(3.0), end.column(1));
        assert!(fin.position.max_abs_diff(req.final_.position) <= 3.0 * 1e-8);
        assert!(fin.tangent.max_abs_diff(req.final_.tangent) <= 1e-8);
    }
}

#[test]
fn scale_invariance() {
    let opts = PlanOptions::default();
    for id in 0..40 {
        let req = random_instance([0.4, 0.8][id as usize % 2], 17, id);
        let base = plan(&req, &opts).unwrap();
        for k in [0.1, 10.0] {
            let res = plan(&physical(&req, k), &opts).unwrap();
            assert_eq!(res.candidates.len(), base.candidates.len());
            for (a, b) in res.candidates.iter().zip(&base.candidates) {
                assert_eq!(a.family, b.family);
                for (x, y) in a.segments.iter().zip(&b.segments) {
                    assert!((x.angle() - y.angle()).abs() <= 1e-9);
                }
                let rel = (a.physical_length - k * b.physical_length).abs() / (k * b.physical_length).max(1e-300);
                assert!(rel <= 1e-9 || b.physical_length == 0.0);
            }
        }
    }
}

#[test]
fn catalog_grows_with_radius() {
    let small: HashSet<String> = family_catalog(0.4, CatalogMode::Table).unwrap().into_iter().map(|f| f.tag).collect();
    let large: HashSet<String> = family_catalog(0.8, CatalogMode::Table).unwrap().into_iter().map(|f| f.tag).collect();
    assert!(small.is_subset(&large));
}

#[test]
fn planning_is_deterministic() {
    let req = random_instance(0.71, 3, 8);
    let a = plan(&req, &PlanOptions::default()).unwrap();
    let b = plan(&req, &PlanOptions::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn single_precision_plans() {
    let g = TurnGeometryf::from_radius(0.5).unwrap();
    use sphere_dubins::SegmentKind::*;
    let m = compose_raw(&[L, G, R], &[0.4f32, 1.0, 0.7], &g);
    let start = sphere_dubins::Configuration::<f32>::canonical();
    let end = sphere_dubins::Configuration::from_frame(&(start.frame() * m).orthonormalized().unwrap()).unwrap();
    let req = PlanRequest {
        sphere_radius: 1.0f32,
        turning_radius: 0.5,
        initial: Pose::from_configuration(&start, 1.0),
        final_: Pose::from_configuration(&end, 1.0),
    };
    let res = plan(&req, &PlanOptions::default()).unwrap();
    assert!(res.best_candidate().unit_length <= 0.5 * 0.4 + 1.0 + 0.5 * 0.7 + 1e-4);
}
