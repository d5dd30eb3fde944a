//! Numerical checks of the extremal structure behind the candidate set:
//! adjoint integration, the shortcut and closed-form replacement
//! constructions, the published net-rotation entries, and randomized audits.

mod net_rotation;
mod extremal;
mod lemmas;
mod oracle;

pub use net_rotation::{net_rotation_products, check_regime, closed_form_phi, NetRotationTables, ChainVariant};
pub use extremal::{
    integrate_extremal, middle_arc_angle, phase_invariants, ExtremalSample, ExtremalState, PhaseReport,
    Trajectory, TOL_HAMILTONIAN, TOL_SINGULAR, TOL_SWITCH,
};
pub use lemmas::{
    closed_phi, closed_replacement, shortcut_constraint, shortcut_construction, shortcut_slopes, ClosedKind,
    CoefficientCheck, Lemma, LemmaReport, ShortcutKind, FD_STEP, TOL_CLOSED, TOL_SHORTCUT,
};
pub use oracle::{
    cross_family_audit, forward_oracle, random_instance, random_rotation, request_for_target, AuditReport,
    AuditRow, OracleHit, TOL_ORACLE,
};
