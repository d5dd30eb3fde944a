//! Command-line front end for the spherical Dubins planner.
//!
//! Every command returns an exit status instead of terminating the process,
//! so the binary and the tests drive the same code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sphere_dubins::kinematics::{compose_path, sample_path};
use sphere_dubins::lab::{forward_oracle, random_instance, Lemma};
use sphere_dubins::planner::{normalize_request, plan, CatalogMode, PlanOptions, PlanRequest, PlanResult, Pose};
use sphere_dubins::{Error, Segment, SegmentKind, Vec3};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RADIUS: i32 = 3;
pub const EXIT_REGIME: i32 = 4;
pub const EXIT_REPORT: i32 = 5;
pub const EXIT_DOMINANCE: i32 = 6;

/// Slack allowed when comparing the planner against the oracle.
pub const DOMINANCE_SLACK: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "sphere-dubins", version, about = "Shortest curvature-constrained paths on a sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan a single instance from a JSON request.
    Plan(PlanArgs),
    /// Plan seeded random instances and write one CSV row per instance.
    Sweep(SweepArgs),
    /// Run one lemma validator, or its whole grid.
    Validate(ValidateArgs),
    /// Compare the planner against a randomized forward search.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Families {
    Table,
    All,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Number of uniform arc-length samples of the best path.
    #[arg(long, requires = "samples_out")]
    pub samples: Option<usize>,
    #[arg(long, requires = "samples")]
    pub samples_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Families::Table)]
    pub families: Families,
    /// Plan beyond the proven radius range; the result is labelled.
    #[arg(long)]
    pub best_effort: bool,
    /// Residual bound on accepted candidates; can only tighten the default.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated list, or `start:stop:step` inclusive.
    #[arg(long)]
    pub r: String,
    #[arg(long)]
    pub instances: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub parallel: usize,
    /// Fill the solve_time_ms column (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub lemma: String,
    #[arg(long, required_unless_present = "grid")]
    pub r: Option<f64>,
    /// Offset or base angle in radians.
    #[arg(long, required_unless_present = "grid")]
    pub param: Option<f64>,
    /// Run the 20 × 20 regime grid instead of a single point.
    #[arg(long)]
    pub grid: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Self { code: EXIT_FAILURE, message: format!("{}: {err}", path.display()) }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::RadiusOutOfRange { .. } => EXIT_RADIUS,
            Error::OutOfRegime(_) => EXIT_REGIME,
            Error::InvalidInput(_) | Error::MalformedConfiguration(_) | Error::OutOfDomain(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        Self { code, message: e.to_string() }
    }
}

type CmdResult = Result<i32, CliError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoseFile {
    pub position: [f64; 3],
    pub tangent: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub sphere_radius: f64,
    pub turning_radius: f64,
    pub initial: PoseFile,
    #[serde(rename = "final")]
    pub final_: PoseFile,
}

impl PlanFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    pub fn request(&self) -> PlanRequest<f64> {
        let pose = |p: &PoseFile| Pose::new(Vec3::from_array(p.position), Vec3::from_array(p.tangent));
        PlanRequest {
            sphere_radius: self.sphere_radius,
            turning_radius: self.turning_radius,
            initial: pose(&self.initial),
            final_: pose(&self.final_),
        }
    }

    pub fn from_request(req: &PlanRequest<f64>) -> Self {
        let pose = |p: &Pose<f64>| PoseFile { position: p.position.to_array(), tangent: p.tangent.to_array() };
        Self {
            sphere_radius: req.sphere_radius,
            turning_radius: req.turning_radius,
            initial: pose(&req.initial),
            final_: pose(&req.final_),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentOut {
    pub kind: String,
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateOut {
    pub family: String,
    pub segments: Vec<SegmentOut>,
    pub unit_length: f64,
    pub physical_length: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestOut {
    pub index: usize,
    #[serde(flatten)]
    pub path: CandidateOut,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanOutput {
    pub unit_r: f64,
    pub sphere_radius: f64,
    pub label: Option<String>,
    pub warnings: Vec<String>,
    pub candidates: Vec<CandidateOut>,
    pub best: BestOut,
}

impl PlanOutput {
    pub fn from_result(res: &PlanResult<f64>) -> Self {
        let candidates: Vec<CandidateOut> = res
            .candidates
            .iter()
            .map(|c| CandidateOut {
                family: c.family.clone(),
                segments: c
                    .segments
                    .iter()
                    .map(|s| SegmentOut { kind: s.kind.letter().to_string(), angle: s.angle() })
                    .collect(),
                unit_length: c.unit_length,
                physical_length: c.physical_length,
                residual: c.residual,
            })
            .collect();
        Self {
            unit_r: res.unit_r,
            sphere_radius: res.sphere_radius,
            label: res.label.clone(),
            warnings: res.warnings.clone(),
            best: BestOut { index: res.best, path: candidates[res.best].clone() },
            candidates,
        }
    }
}

impl CandidateOut {
    /// Rebuilds the segment list; fails on an unknown segment letter.
    pub fn segments(&self) -> Result<Vec<Segment<f64>>, CliError> {
        self.segments
            .iter()
            .map(|s| {
                let mut chars = s.kind.chars();
                match (chars.next().and_then(SegmentKind::from_letter), chars.next()) {
                    (Some(kind), None) => Ok(Segment::new(kind, s.angle)),
                    _ => Err(CliError::usage(format!("segments.kind: unknown segment `{}`", s.kind))),
                }
            })
            .collect()
    }
}

/// Residual of `segments` against the target of `file`, recomputed from scratch.
pub fn recompose_residual(file: &PlanFile, segments: &[Segment<f64>]) -> Result<f64, CliError> {
    let unit = normalize_request(&file.request(), true)?;
    Ok(compose_path(segments, &unit.geom).frobenius_distance(&unit.target))
}

#[derive(Debug, Serialize)]
struct SampleRow {
    s: f64,
    x: f64,
    y: f64,
    z: f64,
    tx: f64,
    ty: f64,
    tz: f64,
    nx: f64,
    ny: f64,
    nz: f64,
    segment_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub instance_id: u64,
    pub seed: u64,
    pub r: f64,
    pub best_family: String,
    pub best_length_unit: f64,
    pub runner_up_family: Option<String>,
    pub gap: Option<f64>,
    pub residual: f64,
    pub solve_time_ms: Option<f64>,
}

/// Parses the process arguments and runs the command.
pub fn main_with_args<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            }
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Plan(a) => plan_cmd(a, out, err),
        Command::Sweep(a) => sweep_cmd(a, out),
        Command::Validate(a) => validate_cmd(a, out),
        Command::Oracle(a) => oracle_cmd(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn options(families: Families, best_effort: bool, tol: Option<f64>) -> Result<PlanOptions<f64>, CliError> {
    let mut opts = PlanOptions::<f64> {
        mode: match families {
            Families::Table => CatalogMode::Table,
            Families::All => CatalogMode::All,
        },
        best_effort,
        ..PlanOptions::default()
    };
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::usage(format!("--tol must be positive and finite, got {t}")));
        }
        opts.tol_residual = opts.tol_residual.min(t);
    }
    Ok(opts)
}

fn write_warnings(err: &mut dyn Write, res: &PlanResult<f64>) {
    for w in &res.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    if let Some(label) = &res.label {
        let _ = writeln!(err, "warning: {label}");
    }
}

pub fn plan_cmd(args: &PlanArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    if matches!(args.samples, Some(n) if n < 2) {
        return Err(CliError::usage("--samples must be at least 2"));
    }
    let file = PlanFile::read(&args.input)?;
    let opts = options(args.families, args.best_effort, args.tol)?;
    let res = plan(&file.request(), &opts)?;
    write_warnings(err, &res);

    let doc = PlanOutput::from_result(&res);
    let json = serde_json::to_string_pretty(&doc).expect("plan output serializes");
    fs::write(&args.output, json + "\n").map_err(|e| CliError::io(&args.output, e))?;

    if let (Some(n), Some(path)) = (args.samples, &args.samples_out) {
        write_samples(&res, n, path)?;
    }
    let best = res.best_candidate();
    let _ = writeln!(out, "best {} length {} (unit {})", best.family, best.physical_length, best.unit_length);
    Ok(EXIT_OK)
}

fn write_samples(res: &PlanResult<f64>, n: usize, path: &Path) -> Result<(), CliError> {
    let best = res.best_candidate();
    let geom = sphere_dubins::TurnGeometry::from_radius(res.unit_r)?;
    let scale = res.sphere_radius;
    let samples = if best.unit_length > 0.0 {
        sample_path(&res.initial, &best.segments, &geom, best.unit_length / (n - 1) as f64)?
    } else {
        sample_path(&res.initial, &[], &geom, 1.0)?
    };
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::io(path, e))?;
    for p in &samples {
        let [x, y, z] = p.config.position().get().scale(scale).to_array();
        let [tx, ty, tz] = p.config.tangent().get().to_array();
        let [nx, ny, nz] = p.config.normal().to_array();
        w.serialize(SampleRow { s: p.s * scale, x, y, z, tx, ty, tz, nx, ny, nz, segment_index: p.segment_index })
            .map_err(|e| CliError::io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Parses `a,b,c` or inclusive `start:stop:step`.
pub fn parse_radii(spec: &str) -> Result<Vec<f64>, CliError> {
    let num = |s: &str| {
        s.trim().parse::<f64>().map_err(|_| CliError::usage(format!("--r: `{}` is not a number", s.trim())))
    };
    let radii = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [a, b, step] = parts[..] else {
            return Err(CliError::usage("--r: range must be start:stop:step"));
        };
        let (a, b, step) = (num(a)?, num(b)?, num(step)?);
        if step.is_nan() || step <= 0.0 || b < a {
            return Err(CliError::usage("--r: range needs start <= stop and a positive step"));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| a + step * k as f64).collect()
    } else {
        spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if radii.is_empty() || radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(CliError::usage("--r: radii must be positive"));
    }
    Ok(radii)
}

fn sweep_row(instance_id: u64, r: f64, seed: u64, k: u64, timing: bool) -> Result<SweepRow, CliError> {
    let req = random_instance(r, seed, k);
    let t0 = Instant::now();
    let res = plan(&req, &PlanOptions::default())?;
    let elapsed = t0.elapsed().as_secs_f64() * 1e3;
    let best = res.best_candidate();
    let runner = res.best_where(|c| c.family != best.family);
    Ok(SweepRow {
        instance_id,
        seed: seed.wrapping_add(k),
        r,
        best_family: best.family.clone(),
        best_length_unit: best.unit_length,
        runner_up_family: runner.map(|c| c.family.clone()),
        gap: runner.map(|c| (c.unit_length - best.unit_length).max(0.0)),
        residual: best.residual,
        solve_time_ms: timing.then_some(elapsed),
    })
}

/// Plans every instance of a sweep; rows come back in instance order.
pub fn sweep_rows(radii: &[f64], instances: usize, seed: u64, parallel: usize, timing: bool) -> Result<Vec<SweepRow>, CliError> {
    let jobs: Vec<(u64, f64, u64)> = radii
        .iter()
        .enumerate()
        .flat_map(|(ri, &r)| (0..instances as u64).map(move |k| ((ri * instances) as u64 + k, r, k)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel)
        .build()
        .map_err(|e| CliError { code: EXIT_FAILURE, message: e.to_string() })?;
    pool.install(|| jobs.par_iter().map(|&(id, r, k)| sweep_row(id, r, seed, k, timing)).collect())
}

pub fn sweep_cmd(args: &SweepArgs, out: &mut dyn Write) -> CmdResult {
    if args.instances == 0 {
        return Err(CliError::usage("--instances must be at least 1"));
    }
    if args.parallel == 0 {
        return Err(CliError::usage("--parallel must be at least 1"));
    }
    let radii = parse_radii(&args.r)?;
    let rows = sweep_rows(&radii, args.instances, args.seed, args.parallel, args.timing)?;
    let mut w = csv::Writer::from_path(&args.output).map_err(|e| CliError::io(&args.output, e))?;
    for row in &rows {
        w.serialize(row).map_err(|e| CliError::io(&args.output, e))?;
    }
    w.flush().map_err(|e| CliError::io(&args.output, e))?;
    let _ = writeln!(out, "{} instances written to {}", rows.len(), args.output.display());
    Ok(EXIT_OK)
}

pub fn validate_cmd(args: &ValidateArgs, out: &mut dyn Write) -> CmdResult {
    let lemma = Lemma::parse(&args.lemma)
        .ok_or_else(|| CliError::usage(format!("--lemma: expected grg, rgl, lrl5 or lrlr6, got `{}`", args.lemma)))?;
    if args.grid {
        let grid = lemma.grid(20, 1e-3);
        let mut failed = 0;
        for &(r, p) in &grid {
            let rep = lemma.report(r, p)?;
            if !rep.passed() {
                failed += 1;
                let _ = writeln!(out, "{rep}");
            }
        }
        let _ = writeln!(out, "{lemma}: {}/{} grid points pass", grid.len() - failed, grid.len());
        return Ok(if failed == 0 { EXIT_OK } else { EXIT_REPORT });
    }
    let (r, p) = (args.r.expect("clap enforces --r"), args.param.expect("clap enforces --param"));
    let rep = lemma.report(r, p)?;
    let _ = writeln!(out, "{rep}");
    Ok(if rep.passed() { EXIT_OK } else { EXIT_REPORT })
}

pub fn oracle_cmd(args: &OracleArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let file = PlanFile::read(&args.input)?;
    let res = plan(&file.request(), &PlanOptions::default())?;
    write_warnings(err, &res);
    let geom = sphere_dubins::TurnGeometry::from_radius(res.unit_r)?;
    let best = res.best_candidate();
    let _ = writeln!(out, "plan    {:<8} {}", best.family, best.unit_length);
    let holds = match forward_oracle(&res.target, &geom, args.seed, args.budget) {
        Some(hit) => {
            let _ = writeln!(out, "oracle  {:<8} {}", hit.family, hit.unit_length);
            best.unit_length <= hit.unit_length + DOMINANCE_SLACK
        }
        None => {
            let _ = writeln!(out, "oracle  found no path within budget {}", args.budget);
            true
        }
    };
    let _ = writeln!(out, "dominance {}", if holds { "holds" } else { "FAILS" });
    Ok(if holds { EXIT_OK } else { EXIT_DOMINANCE })
}
