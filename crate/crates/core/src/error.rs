use thiserror::Error;

/// Errors raised by the geometry, solver, planner and verification code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("alignment is degenerate: vector is (nearly) parallel to the rotation axis")]
    DegenerateAlignment,

    #[error("inconsistent alignment pair: axial components differ by {0:e}")]
    InconsistentPair(f64),

    #[error("unit turning radius {r} is outside (0, sqrt(3)/2]")]
    RadiusOutOfRange { r: f64 },

    #[error("malformed configuration: {0}")]
    MalformedConfiguration(String),

    #[error("no candidate path reaches the target")]
    NoCandidateFound,

    #[error("argument outside the domain: {0}")]
    OutOfDomain(String),

    #[error("parameter outside the lemma's regime: {0}")]
    OutOfRegime(String),

    #[error("invalid initial extremal state: {0}")]
    InvalidInitialState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
