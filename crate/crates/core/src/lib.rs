//! Exact simulation of perfect quantum state transfer on engineered xx spin
//! chains, together with an exact Pauli-string algebra for the Heisenberg
//! picture commutator expansion.
//!
//! The crate is `no_std` (it needs `alloc`). Every module is a pure function
//! of its inputs; file formats, reports and the command line live in the
//! `spinwire` companion crate.
//!
//! Conventions shared by every module:
//!
//! * Site 1 is the most significant bit of a basis index.
//! * `|0⟩` is spin down with `Z|0⟩ = +½|0⟩`; an *excitation* is a `|1⟩`.
//! * Symbolic operators are written with σ-letters; the spin-½ operators of the
//!   chain Hamiltonian are `σ/2`, so every factor of ½ lives in a coefficient.
#![no_std]

extern crate alloc;

pub mod chain;
pub mod codes;
pub mod dynamics;
pub mod linalg;
pub mod pauli;
pub mod protocols;

mod error;

pub use chain::{ChainSpec, CouplingProfile, SpectrumReport, SpmcStatus};
pub use codes::{BlochVector, FrameRole, LogicalFrame, LogicalOperators};
pub use dynamics::{MirrorReport, Propagator, QuantumState};
pub use error::{Error, Result};
pub use pauli::{Coefficient, PauliLetter, PauliOperator, PauliString};
pub use protocols::{ProtocolId, TransferReport, WireStateSpec};
