mod common;

use std::f64::consts::PI;

use common::{chain_request, run, s, write_request};
use sphere_dubins::SegmentKind::*;
use sphere_dubins_cli::{recompose_residual, PlanFile, PlanOutput, EXIT_OK, EXIT_RADIUS, EXIT_USAGE};

#[test]
fn plan_output_round_trips_and_names_best() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_request(dir.path(), "in.json", &chain_request(&[R, L, R], &[0.7, PI, 0.7], 0.71, 3.0));
    let output = dir.path().join("out.json");
    let r = run(&["plan", "--input", s(&input), "--output", s(&output)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);

    let doc: PlanOutput = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(doc.best.path.family, "RLpiR");
    assert!((doc.best.path.unit_length - 3.2245).abs() < 5e-4);
    assert!((doc.best.path.physical_length - 3.0 * doc.best.path.unit_length).abs() < 1e-12);
    assert!((doc.unit_r - 0.71).abs() < 1e-12);
    assert_eq!(doc.candidates[doc.best.index], doc.best.path);

    let file = PlanFile::read(&input).unwrap();
    for c in &doc.candidates {
        let again = recompose_residual(&file, &c.segments().unwrap()).unwrap();
        assert!((again - c.residual).abs() <= 1e-12, "{}: {again} vs {}", c.family, c.residual);
    }
}

#[test]
fn identity_plans_empty_path() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_request(dir.path(), "in.json", &chain_request(&[], &[], 0.4, 1.0));
    let output = dir.path().join("out.json");
    assert_eq!(run(&["plan", "--input", s(&input), "--output", s(&output)]).code, EXIT_OK);
    let doc: PlanOutput = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(doc.best.path.unit_length, 0.0);
    assert!(doc.best.path.segments.is_empty());
}

#[test]
fn radius_beyond_range_needs_best_effort() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_request(dir.path(), "in.json", &chain_request(&[L, R], &[1.0, 1.0], 0.9, 1.0));
    let output = dir.path().join("out.json");
    let r = run(&["plan", "--input", s(&input), "--output", s(&output)]);
    assert_eq!(r.code, EXIT_RADIUS);
    let r = run(&["plan", "--input", s(&input), "--output", s(&output), "--best-effort"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let doc: PlanOutput = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert!(doc.label.is_some());
    assert!(r.stderr.contains("heuristic"));
}

#[test]
fn malformed_input_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut req = chain_request(&[L], &[1.0], 0.4, 2.0);
    req.initial.tangent = req.initial.position;
    let input = write_request(dir.path(), "bad.json", &req);
    let r = run(&["plan", "--input", s(&input), "--output", s(&dir.path().join("o.json"))]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("initial.tangent"), "{}", r.stderr);

    let missing = dir.path().join("missing.json");
    std::fs::write(&missing, r#"{"sphere_radius": 1.0}"#).unwrap();
    let r = run(&["plan", "--input", s(&missing), "--output", s(&dir.path().join("o.json"))]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("turning_radius"), "{}", r.stderr);
}

#[test]
fn slightly_inconsistent_pose_is_repaired_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let mut req = chain_request(&[L, G], &[1.0, 0.5], 0.4, 2.0);
    req.initial.tangent.x += 1e-7;
    let input = write_request(dir.path(), "in.json", &req);
    let r = run(&["plan", "--input", s(&input), "--output", s(&dir.path().join("o.json"))]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stderr.contains("warning"), "{}", r.stderr);
}

#[test]
fn samples_are_uniform_in_arc_length() {
    let dir = tempfile::tempdir().unwrap();
    let scale = 2.5;
    let input = write_request(dir.path(), "in.json", &chain_request(&[L, G, R], &[1.1, 0.8, 2.0], 0.45, scale));
    let csv_path = dir.path().join("s.csv");
    let n = 37;
    let r = run(&[
        "plan", "--input", s(&input), "--output", s(&dir.path().join("o.json")),
        "--samples", &n.to_string(), "--samples-out", s(&csv_path),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let doc: PlanOutput =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o.json")).unwrap()).unwrap();
    let total = doc.best.path.physical_length;
    let step = total / (n - 1) as f64;

    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["s", "x", "y", "z", "tx", "ty", "tz", "nx", "ny", "nz", "segment_index"]
    );
    let rows: Vec<Vec<f64>> =
        rdr.records().map(|r| r.unwrap().iter().map(|v| v.parse().unwrap()).collect()).collect();
    let on_grid = |sv: f64| ((sv / step).round() * step - sv).abs() < 1e-9;
    assert!(rows.iter().filter(|row| on_grid(row[0])).count() >= n);
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if on_grid(a[0]) && on_grid(b[0]) {
            assert!((b[0] - a[0] - step).abs() < 1e-9, "{} -> {}", a[0], b[0]);
        } else {
            // an off-grid row is a segment boundary
            assert!(b[0] > a[0]);
            let off = if on_grid(a[0]) { b } else { a };
            let next_idx = rows.iter().position(|row| row[0] > off[0]).map(|i| rows[i][10]);
            assert!(next_idx.is_none_or(|i| i != off[10]), "stray off-grid row at s = {}", off[0]);
        }
        let radius = (b[1] * b[1] + b[2] * b[2] + b[3] * b[3]).sqrt();
        assert!((radius - scale).abs() < 1e-9);
    }
    assert!((rows.last().unwrap()[0] - total).abs() < 1e-9);
}

#[test]
fn tol_flag_rejects_nonsense() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_request(dir.path(), "in.json", &chain_request(&[L], &[1.0], 0.4, 1.0));
    let out = dir.path().join("o.json");
    assert_eq!(run(&["plan", "--input", s(&input), "--output", s(&out), "--tol", "-1"]).code, EXIT_USAGE);
    assert_eq!(run(&["plan", "--input", s(&input), "--output", s(&out), "--tol", "1e-11"]).code, EXIT_OK);
    assert_eq!(run(&["plan", "--input", s(&input), "--output", s(&out), "--samples", "1", "--samples-out", "x"]).code, EXIT_USAGE);
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    let args = |p: &std::path::Path, par: &str| {
        run(&["sweep", "--r", "0.3,0.5,0.8", "--instances", "10", "--seed", "7", "--output", s(p), "--parallel", par]).code
    };
    assert_eq!(args(&a, "1"), EXIT_OK);
    assert_eq!(args(&b, "1"), EXIT_OK);
    assert_eq!(args(&c, "4"), EXIT_OK);
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert_eq!(bytes, std::fs::read(&c).unwrap());

    let mut rdr = csv::Reader::from_path(&a).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["instance_id", "seed", "r", "best_family", "best_length_unit", "runner_up_family", "gap", "residual", "solve_time_ms"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 30);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0].parse::<usize>().unwrap(), i);
        assert!(row[6].is_empty() || row[6].parse::<f64>().unwrap() >= 0.0);
        assert!(row[7].parse::<f64>().unwrap() <= 1e-9);
        assert!(row[8].is_empty());
    }
}

#[test]
fn sweep_flag_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    assert_eq!(run(&["sweep", "--r", "0.5", "--instances", "0", "--output", s(&out)]).code, EXIT_USAGE);
    assert_eq!(run(&["sweep", "--r", "abc", "--instances", "2", "--output", s(&out)]).code, EXIT_USAGE);
    assert_eq!(run(&["sweep", "--r", "0.5", "--output", s(&out)]).code, EXIT_USAGE);
    assert_eq!(run(&["sweep", "--r", "0.3:0.5:0.1", "--instances", "1", "--output", s(&out)]).code, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 4);
}

#[test]
fn sweep_timing_fills_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let r = run(&["sweep", "--r", "0.6", "--instances", "2", "--output", s(&out), "--timing"]);
    assert_eq!(r.code, EXIT_OK);
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    for row in rdr.records() {
        assert!(row.unwrap()[8].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn validate_exit_codes() {
    let r = run(&["validate", "--lemma", "grg", "--r", "0.5", "--param", "0.5236"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("PASS"));
    assert_eq!(run(&["validate", "--lemma", "lrlr6", "--r", "0.72", "--param", "0.6981"]).code, 0);
    assert_eq!(run(&["validate", "--lemma", "rgl", "--r", "0.5", "--param", "0.3"]).code, 4);
    assert_eq!(run(&["validate", "--lemma", "nope", "--r", "0.5", "--param", "0.3"]).code, 2);
    assert_eq!(run(&["validate", "--lemma", "grg"]).code, 2);
    let r = run(&["validate", "--lemma", "lrl5", "--grid"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("400/400"));
}

#[test]
fn oracle_dominance() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_request(
        dir.path(),
        "ex2.json",
        &chain_request(&[R, L, R, L], &[0.35, 3.5458, 3.5458, 0.35], 0.55, 1.0),
    );
    let r = run(&["oracle", "--input", s(&input), "--budget", "100000", "--seed", "3"]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("dominance holds"));

    let id = write_request(dir.path(), "id.json", &chain_request(&[], &[], 0.5, 1.0));
    let r = run(&["oracle", "--input", s(&id), "--budget", "1000"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.lines().take(2).all(|l| l.trim_end().ends_with(" 0")), "{}", r.stdout);
}
