#![allow(dead_code)]

use std::path::{Path, PathBuf};

use sphere_dubins::kinematics::compose_raw;
use sphere_dubins::planner::{PlanRequest, Pose};
use sphere_dubins::{Configuration, SegmentKind, TurnGeometry};
use sphere_dubins_cli::{main_with_args, PlanFile};

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["sphere-dubins"];
    full.extend_from_slice(args);
    let code = main_with_args(full, &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

/// Request whose target is the given chain, started from the canonical pose on a sphere of `scale`.
pub fn chain_request(kinds: &[SegmentKind], angles: &[f64], r: f64, scale: f64) -> PlanRequest<f64> {
    let geom = TurnGeometry::from_radius(r).unwrap();
    let m = compose_raw(kinds, angles, &geom);
    let start = Configuration::canonical();
    let end = Configuration::from_frame(&(start.frame() * m)).unwrap();
    PlanRequest {
        sphere_radius: scale,
        turning_radius: r * scale,
        initial: Pose::from_configuration(&start, scale),
        final_: Pose::from_configuration(&end, scale),
    }
}

pub fn write_request(dir: &Path, name: &str, req: &PlanRequest<f64>) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(&PlanFile::from_request(req)).unwrap()).unwrap();
    path
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}
