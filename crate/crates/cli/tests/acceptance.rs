//! End-to-end acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{chain_request, run};
use sphere_dubins::kinematics::{compose_path, relative_rotation, sample_path, segment_rotation};
use sphere_dubins::lab::{
    net_rotation_products, closed_form_phi, cross_family_audit, forward_oracle, integrate_extremal, phase_invariants,
    random_instance, ChainVariant, ExtremalState, Lemma,
};
use sphere_dubins::planner::{max_radius, plan, PlanOptions, PlanResult};
use sphere_dubins::{Configuration, Segment, SegmentKind, TurnGeometry, UnitVec3, Vec3};
use SegmentKind::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn timed_plan(kinds: &[SegmentKind], angles: &[f64], r: f64) -> (PlanResult<f64>, Duration) {
    let req = chain_request(kinds, angles, r, 1.0);
    let t0 = Instant::now();
    let res = plan(&req, &PlanOptions::default()).expect("plan");
    (res, t0.elapsed())
}

fn example_one() -> Outcome {
    let (res, dt) = timed_plan(&[R, L, R], &[0.7, PI, 0.7], 0.71);
    let best = res.best_candidate();
    let alt = res.best_where(|c| c.family.len() == 3).expect("a three-segment candidate");
    let msg = format!(
        "best {} {:.6}, best CGC/CCC {} {:.6}, {:.1} ms",
        best.family,
        best.unit_length,
        alt.family,
        alt.unit_length,
        dt.as_secs_f64() * 1e3
    );
    check(
        best.family == "RLpiR"
            && (best.unit_length - 3.2245).abs() <= 5e-4
            && alt.family == "LRL"
            && (alt.unit_length - 6.6964).abs() <= 5e-4
            && dt < Duration::from_secs(1),
        msg,
    )
}

fn example_two() -> Outcome {
    let (res, dt) = timed_plan(&[R, L, R, L], &[0.35, 3.5458, 3.5458, 0.35], 0.55);
    let best = res.best_candidate();
    let alt = res.best_where(|c| c.family != best.family).expect("another family");
    let msg = format!(
        "best {} {:.6}, best other {} {:.6}, {:.1} ms",
        best.family,
        best.unit_length,
        alt.family,
        alt.unit_length,
        dt.as_secs_f64() * 1e3
    );
    check(
        best.family == "RLRL"
            && (best.unit_length - 4.2853).abs() <= 5e-4
            && alt.family == "LRL"
            && (alt.unit_length - 4.3643).abs() <= 5e-4
            && dt < Duration::from_secs(1),
        msg,
    )
}

fn reference_cases() -> Outcome {
    let cases = [
        (Lemma::Grg, 0.5, 30.0f64),
        (Lemma::Rgl, 0.865, 20.0),
        (Lemma::Lrl5, 0.55, 40.0),
        (Lemma::Lrlr6, 0.72, 40.0),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (lemma, r, deg) in cases {
        let param = deg.to_radians();
        let cli = run(&["validate", "--lemma", lemma.name(), "--r", &r.to_string(), "--param", &param.to_string()]);
        let rep = lemma.report(r, param).expect("in regime");
        let pass = cli.code == 0 && rep.passed() && rep.endpoint_residual <= 1e-8 && rep.length_delta > 0.0;
        ok &= pass;
        parts.push(format!("{lemma} res {:.1e} saves {:.4}", rep.endpoint_residual, rep.length_delta));
    }
    check(ok, parts.join("; "))
}

fn lemma_sweeps() -> Outcome {
    let mut total = 0;
    let mut failed = 0;
    let mut coeffs = 0;
    for lemma in Lemma::ALL {
        for (r, p) in lemma.grid(20, 1e-3) {
            let rep = lemma.report(r, p).expect("grid is in regime");
            total += 1;
            coeffs += rep.coefficient_checks.len();
            if !rep.passed() {
                failed += 1;
            }
        }
    }
    check(
        failed == 0 && total == 1600 && coeffs > 0,
        format!("{} of {total} grid points pass, {coeffs} coefficient checks", total - failed),
    )
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

fn net_rotation_entries() -> Outcome {
    let cases = [
        (ChainVariant::ThreeTurn, grid(0.05, FRAC_1_SQRT_2, 10)),
        (ChainVariant::FourTurn, grid(FRAC_1_SQRT_2 + 1e-3, max_radius::<f64>(), 10)),
    ];
    let (mut worst_formula, mut worst_closure) = (0.0f64, 0.0f64);
    for (v, rs) in cases {
        for &r in &rs {
            for &b in &grid(0.05, PI - 0.05, 10) {
                let (s, c) = closed_form_phi(v, r, b);
                let t = net_rotation_products(v, r, b, s.atan2(c)).expect("in regime");
                worst_formula = worst_formula.max(t.formula_error());
                worst_closure = worst_closure.max(t.closure_error());
            }
        }
    }
    check(
        worst_formula <= 1e-10 && worst_closure <= 1e-9,
        format!("formula vs product {worst_formula:.1e}, replacement vs original {worst_closure:.1e}"),
    )
}

fn optimality_audit() -> Outcome {
    const SEED: u64 = 20_240_601;
    let radii = [0.3, 0.5, 0.71, 0.8];
    let requests: Vec<_> =
        radii.iter().flat_map(|&r| (0..50u64).map(move |id| (id, random_instance(r, SEED, id)))).collect();
    let rows: Vec<(f64, f64)> = requests
        .par_iter()
        .map(|(id, req)| {
            let res = plan(req, &PlanOptions::default()).expect("plan");
            let best = res.best_candidate();
            let geom = TurnGeometry::from_radius(res.unit_r).unwrap();
            let beat = forward_oracle(&res.target, &geom, SEED + id, 100_000)
                .map_or(f64::NEG_INFINITY, |hit| best.unit_length - hit.unit_length);
            (best.residual, beat)
        })
        .collect();
    let reqs: Vec<_> = requests.into_iter().map(|(_, r)| r).collect();
    let audit = cross_family_audit(&reqs).expect("audit");
    let worst_res = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let worst_beat = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    check(
        rows.len() == 200 && worst_res <= 1e-8 && worst_beat <= 1e-6 && audit.max_gap <= 1e-6,
        format!(
            "200 instances, max residual {worst_res:.1e}, oracle margin {worst_beat:.1e}, audit gap {:.1e}, CC_piC wins {}",
            audit.max_gap, audit.fixed_middle_hits
        ),
    )
}

fn extremal_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut worst, mut worst_arc, mut arcs) = (0.0f64, 0.0f64, 0usize);
    let mut states = 0;
    for lambda in [0.0, 1.0] {
        for _ in 0..100 {
            let r: f64 = rng.random_range(0.1..0.86);
            let u = (1.0 / (r * r) - 1.0).sqrt();
            let init = ExtremalState::on_shell(lambda, rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5), u);
            let traj = integrate_extremal(init, 10.0, 1e-3).expect("valid state");
            let rep = phase_invariants(&traj);
            worst = worst.max(rep.j_drift).max(rep.f_drift).max(rep.hamiltonian_drift);
            if lambda == 0.0 {
                for a in traj.complete_arc_angles() {
                    arcs += 1;
                    worst_arc = worst_arc.max((a - PI).abs());
                }
            }
            states += 1;
        }
    }
    check(
        states == 200 && worst <= 1e-8 && worst_arc <= 1e-6 && arcs > 0,
        format!("{states} states, max drift {worst:.1e}, {arcs} complete abnormal arcs within {worst_arc:.1e} of pi"),
    )
}

fn random_unit(rng: &mut ChaCha8Rng) -> UnitVec3<f64> {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if let Some(u) = UnitVec3::normalize(v, 1e-3) {
            return u;
        }
    }
}

fn random_config(rng: &mut ChaCha8Rng) -> Configuration<f64> {
    let p = random_unit(rng);
    let t = UnitVec3::normalize(random_unit(rng).get().reject_from(p), 1e-6);
    match t {
        Some(t) => Configuration::new(p, t).unwrap(),
        None => random_config(rng),
    }
}

fn group_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let kinds = [L, R, G];
    let mut failures = 0;
    for i in 0..10_000 {
        let r: f64 = rng.random_range(0.01..0.99);
        let geom = TurnGeometry::from_radius(r).unwrap();
        let k = kinds[rng.random_range(0..3)];
        let (a, b) = (rng.random_range(0.0..2.0 * PI), rng.random_range(0.0..2.0 * PI));
        let m = segment_rotation(k, a, &geom);
        let prod = m * segment_rotation(k, b, &geom);
        let sum = segment_rotation(k, a + b, &geom);
        let axis = geom.axis(k).get();
        let mut ok = m.orthonormality_error() <= 1e-10
            && (m.determinant() - 1.0).abs() <= 1e-10
            && prod.max_abs_diff(&sum) <= 1e-10
            && m.apply(axis).max_abs_diff(axis) <= 1e-12
            && segment_rotation(k, 2.0 * PI, &geom).max_abs_diff(&sphere_dubins::Rot3::identity()) <= 1e-12;

        let (ci, cf) = (random_config(&mut rng), random_config(&mut rng));
        let rel = relative_rotation(&ci, &cf);
        ok &= rel.orthonormality_error() <= 1e-10 && (ci.frame() * rel).max_abs_diff(&cf.frame()) <= 1e-10;

        if i % 20 == 0 {
            let segs: Vec<Segment<f64>> =
                (0..3).map(|_| Segment::new(kinds[rng.random_range(0..3)], rng.random_range(0.0..PI))).collect();
            let samples = sample_path(&ci, &segs, &geom, 0.05).unwrap();
            let end = samples.last().unwrap().frame;
            ok &= end.max_abs_diff(&(ci.frame() * compose_path(&segs, &geom))) <= 1e-9;
        }
        if !ok {
            failures += 1;
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let outputs: Vec<Vec<u8>> = ["1", "2", "8"]
        .iter()
        .map(|par| {
            let path = dir.path().join(format!("sweep{par}.csv"));
            let code = run(&[
                "sweep", "--r", "0.3,0.5,0.71,0.8", "--instances", "25", "--seed", "7",
                "--output", path.to_str().unwrap(), "--parallel", par,
            ])
            .code;
            assert_eq!(code, 0);
            std::fs::read(path).unwrap()
        })
        .collect();
    let identical = outputs.windows(2).all(|w| w[0] == w[1]);
    check(
        failures == 0 && identical,
        format!(
            "{failures} of 10000 group checks failed, sweep bytes identical across --parallel 1/2/8: {identical}"
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 example: RLpiR beats LRL at r = 0.71", example_one),
        ("2 example: RLRL beats LRL at r = 0.55", example_two),
        ("3 reference lemma cases", reference_cases),
        ("4 lemma sweeps", lemma_sweeps),
        ("5 net-rotation entry formulas", net_rotation_entries),
        ("6 optimality audit", optimality_audit),
        ("7 extremal invariants", extremal_invariants),
        ("8 group properties and sweep determinism", group_properties),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t0 = Instant::now();
        let outcome = f();
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS  {name}: {msg} [{secs:.2} s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg} [{secs:.2} s]");
            }
        }
    }
    println!("{} of 8 acceptance criteria pass", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
