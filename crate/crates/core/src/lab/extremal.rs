//! Adjoint dynamics of the length-minimal control problem and their
//! conserved quantities.

use crate::error::{Error, Result};
use crate::kinematics::{Rot3, UnitVec3, Vec3};

/// Hamiltonian-zero tolerance on initial data.
pub const TOL_HAMILTONIAN: f64 = 1e-9;
/// Arc-length precision of located switching points.
pub const TOL_SWITCH: f64 = 1e-12;
/// Magnitude below which `H12` and `h2` count as zero for the great-circle branch.
pub const TOL_SINGULAR: f64 = 1e-12;

/// Frame and costate of an extremal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalState {
    pub frame: Rot3<f64>,
    pub h1: f64,
    pub h2: f64,
    pub h12: f64,
    /// Cost multiplier, 0 (abnormal) or 1 (normal).
    pub lambda: f64,
    pub u_max: f64,
}

impl ExtremalState {
    /// State with `h1` chosen so the Hamiltonian vanishes.
    pub fn on_shell(lambda: f64, h2: f64, h12: f64, u_max: f64) -> Self {
        Self {
            frame: Rot3::identity(),
            h1: lambda - u_max * h12.abs(),
            h2,
            h12,
            lambda,
            u_max,
        }
    }

    /// `J = h1² + h2² + H12²`.
    pub fn j(&self) -> f64 {
        self.h1 * self.h1 + self.h2 * self.h2 + self.h12 * self.h12
    }

    /// Phase-portrait invariant `(|H12| − λU/(1+U²))² + (H12'/√(1+U²))²`.
    pub fn f(&self) -> f64 {
        let u2 = 1.0 + self.u_max * self.u_max;
        let centre = self.h12.abs() - self.lambda * self.u_max / u2;
        centre * centre + self.h2 * self.h2 / u2
    }

    /// Bang-bang control `κ = −U sgn(H12)`; at `H12 = 0` the sign is taken
    /// from the direction `H12` is about to move.
    pub fn control(&self) -> f64 {
        if self.h12 != 0.0 {
            -self.u_max * self.h12.signum()
        } else if self.h2 != 0.0 {
            self.u_max * self.h2.signum()
        } else {
            0.0
        }
    }

    /// `−λ + h1 − κ H12`.
    pub fn hamiltonian(&self) -> f64 {
        let kappa = if self.h12 != 0.0 { -self.u_max * self.h12.signum() } else { 0.0 };
        -self.lambda + self.h1 - kappa * self.h12
    }

    fn validate(&self) -> Result<()> {
        if self.lambda != 0.0 && self.lambda != 1.0 {
            return Err(Error::InvalidInitialState(format!("lambda must be 0 or 1, got {}", self.lambda)));
        }
        if !(self.u_max > 0.0) {
            return Err(Error::InvalidInitialState("u_max must be positive".into()));
        }
        let ham = self.hamiltonian();
        if ham.abs() > TOL_HAMILTONIAN {
            return Err(Error::InvalidInitialState(format!("Hamiltonian is {ham:e}, not zero")));
        }
        if self.lambda == 0.0 && self.h12 == 0.0 && self.h2 == 0.0 {
            return Err(Error::InvalidInitialState(
                "abnormal extremal with H12 identically zero".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalSample {
    pub s: f64,
    pub state: ExtremalState,
    /// Control applied from this sample onward.
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<ExtremalSample>,
    /// Arc lengths at which `H12` changes sign.
    pub switches: Vec<f64>,
    pub great_circle: bool,
}

impl Trajectory {
    /// Turn angles of the arcs strictly between consecutive switches.
    pub fn complete_arc_angles(&self) -> Vec<f64> {
        let u = self.samples.first().map_or(0.0, |p| p.state.u_max);
        let r = 1.0 / (1.0 + u * u).sqrt();
        self.switches.windows(2).map(|w| (w[1] - w[0]) / r).collect()
    }
}

fn costate_rate(kappa: f64, y: [f64; 3]) -> [f64; 3] {
    let [h1, h2, h12] = y;
    [-kappa * h2, h12 + kappa * h1, -h2]
}

fn rk4(kappa: f64, y: [f64; 3], h: f64) -> [f64; 3] {
    let add = |a: [f64; 3], b: [f64; 3], s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
    let k1 = costate_rate(kappa, y);
    let k2 = costate_rate(kappa, add(y, k1, h / 2.0));
    let k3 = costate_rate(kappa, add(y, k2, h / 2.0));
    let k4 = costate_rate(kappa, add(y, k3, h));
    let mut out = y;
    for i in 0..3 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Frame increment `exp(h Ω(κ))`, a rotation about `(κ, 0, 1)`.
fn frame_step(kappa: f64, h: f64) -> Rot3<f64> {
    let w = Vec3::new(kappa, 0.0, 1.0);
    let n = w.norm();
    Rot3::about_unit_axis(UnitVec3::normalize(w, 0.0).expect("non-zero axis"), h * n)
}

fn advance(state: &ExtremalState, kappa: f64, h: f64) -> ExtremalState {
    let [h1, h2, h12] = rk4(kappa, [state.h1, state.h2, state.h12], h);
    ExtremalState {
        frame: state.frame * frame_step(kappa, h),
        h1,
        h2,
        h12,
        ..*state
    }
}

/// RK4 integration of the costate with exact frame updates; sign changes
/// of `H12` are located by bisection and the control switched there.
pub fn integrate_extremal(init: ExtremalState, length: f64, step: f64) -> Result<Trajectory> {
    if !(step > 0.0) || !(length >= 0.0) {
        return Err(Error::InvalidInput("step must be positive and length non-negative".into()));
    }
    init.validate()?;
    let great_circle =
        init.lambda == 1.0 && init.h12.abs() <= TOL_SINGULAR && init.h2.abs() <= TOL_SINGULAR;
    let control = |st: &ExtremalState| if great_circle { 0.0 } else { st.control() };

    let mut state = init;
    let mut s = 0.0;
    let mut kappa = control(&state);
    let mut samples = vec![ExtremalSample { s, state, kappa }];
    let mut switches = Vec::new();

    while s < length - 1e-15 {
        let h = step.min(length - s);
        let next = advance(&state, kappa, h);
        let crossed = !great_circle && kappa != 0.0 && (next.h12 * kappa > 0.0);
        if crossed {
            // H12 left the side the current control belongs to; κ·H12 < 0 there
            let (mut lo, mut hi) = (0.0, h);
            while hi - lo > TOL_SWITCH {
                let mid = 0.5 * (lo + hi);
                if advance(&state, kappa, mid).h12 * kappa > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            state = advance(&state, kappa, hi);
            s += hi;
            kappa = control(&state);
            switches.push(s);
            samples.push(ExtremalSample { s, state, kappa });
            continue;
        }
        state = next;
        s += h;
        kappa = control(&state);
        samples.push(ExtremalSample { s, state, kappa });
    }
    Ok(Trajectory { samples, switches, great_circle })
}

/// Maximum drifts of the conserved quantities along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseReport {
    pub j_drift: f64,
    pub f_drift: f64,
    pub hamiltonian_drift: f64,
    /// Largest jump of `f` between the samples on either side of a switch.
    pub f_jump_at_switch: f64,
}

pub fn phase_invariants(traj: &Trajectory) -> PhaseReport {
    let Some(first) = traj.samples.first() else {
        return PhaseReport { j_drift: 0.0, f_drift: 0.0, hamiltonian_drift: 0.0, f_jump_at_switch: 0.0 };
    };
    let (j0, f0) = (first.state.j(), first.state.f());
    let mut rep = PhaseReport { j_drift: 0.0, f_drift: 0.0, hamiltonian_drift: 0.0, f_jump_at_switch: 0.0 };
    for p in &traj.samples {
        rep.j_drift = rep.j_drift.max((p.state.j() - j0).abs());
        rep.f_drift = rep.f_drift.max((p.state.f() - f0).abs());
        rep.hamiltonian_drift = rep.hamiltonian_drift.max(p.state.hamiltonian().abs());
    }
    for w in traj.samples.windows(2) {
        if traj.switches.contains(&w[1].s) {
            rep.f_jump_at_switch = rep.f_jump_at_switch.max((w[1].state.f() - w[0].state.f()).abs());
        }
    }
    rep
}

/// Turn angle `π + β` of an interior arc of a normal extremal whose phase
/// radius is `lambda_h12`.
pub fn middle_arc_angle(lambda_h12: f64, u_max: f64) -> Result<f64> {
    let u2 = 1.0 + u_max * u_max;
    let bound = u_max / u2;
    if !(lambda_h12 > bound) {
        return Err(Error::OutOfDomain(format!(
            "lambda_h12 = {lambda_h12} must exceed u_max/(1+u_max^2) = {bound}"
        )));
    }
    let root = (lambda_h12 * lambda_h12 * u2 * u2 - u_max * u_max).sqrt();
    Ok(std::f64::consts::PI + 2.0 * (u_max / root).atan())
}
