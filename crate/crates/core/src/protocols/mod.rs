//! End-to-end transfer protocols and their comparison baselines.
//!
//! Every runner is a pure function of the chain, the Bloch vector to send,
//! and the wire preparation (including its seed). [`Simulator`] keeps the
//! propagator and derived corrections of one chain for repeated runs.

mod batch;
mod difranco;
mod report;
mod simulator;
mod wire;


pub use batch::{batch_average, batch_sample, sample_rng, BatchSample, BatchStatistics};
pub use difranco::{
    bloch_rotation, derive_difranco_corrections, BranchReport, DiFrancoCorrections, DiFrancoMode,
    SpinAxis,
};
pub use report::{DiFrancoDetails, ProtocolId, TransferReport};
pub use simulator::{
    fidelity_scan, transfer_difranco, transfer_single_qubit_initialized,
    transfer_single_qubit_uninitialized, transfer_two_qubit_code, Route, Simulator,
    SingleQubitOptions, DENSITY_MAX_SITES,
};
pub use wire::{random_bloch, random_pure_vector, WireDescriptor, WireStateSpec};
