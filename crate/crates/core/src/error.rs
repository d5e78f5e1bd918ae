use alloc::string::String;

/// Errors raised by the simulator and the symbolic algebra.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("operators act on {left} and {right} sites")]
    SiteCountMismatch { left: usize, right: usize },

    #[error("chain of {n} sites is too short, need at least {min}")]
    ChainTooShort { n: usize, min: usize },

    #[error("expected {expected} couplings, got {got}")]
    CouplingCount { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{n} sites exceeds the dense size budget of {max}")]
    SizeBudget { n: usize, max: usize },

    #[error("term budget of {budget} exceeded at adjoint depth {depth} ({terms} terms)")]
    TermBudget {
        depth: usize,
        terms: usize,
        budget: usize,
    },

    #[error("no numeric value supplied for coupling J{index}")]
    MissingCoupling { index: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("site {site} is out of range for a chain of {n} sites")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("site set must not be empty")]
    EmptySiteSet,

    #[error("observable is not a spin component with spectrum ±1/2")]
    NotSpinComponent,

    #[error("measurement outcome {outcome} has zero probability")]
    ZeroProbabilityOutcome { outcome: f64 },

    #[error("state leaks out of the code subspace (leakage {leakage:.3e})")]
    Leakage { leakage: f64 },

    #[error("Bloch vector has norm {norm} > 1")]
    BlochOutOfBall { norm: f64 },

    #[error("sender and receiver pairs overlap on a chain of {n} sites")]
    OverlappingFrames { n: usize },

    #[error("process fit failed: {0}")]
    ProcessFit(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Crate result alias.
pub type Result<T> = core::result::Result<T, Error>;
