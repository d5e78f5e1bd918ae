//! Exact time evolution by sector-blocked eigendecomposition, partial traces,
//! projective spin measurements, and the mirror relations at the transfer
//! time `t* = π / J`.

mod measure;
mod mirror;
mod propagator;
mod state;

pub use measure::{measure, outcome_probabilities, MeasurementResult, Outcome};
pub use mirror::{verify_mirror_relations, MirrorCheck, MirrorReport, Parity};
pub use propagator::{evolve, heisenberg_at, make_propagator, Propagator};
pub use state::{partial_trace, QuantumState};
