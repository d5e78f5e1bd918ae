use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::difranco::{BranchReport, SpinAxis};
use super::wire::WireDescriptor;
use crate::chain::ChainSpec;
use crate::codes::BlochVector;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ProtocolId {
    /// Two-qubit code on sites `(1, 2)`, arbitrary wire, no measurements.
    #[cfg_attr(feature = "serde", serde(rename = "code2"))]
    TwoQubitCode,
    /// Single qubit on site 1, wire forced to `|0…0⟩`.
    #[cfg_attr(feature = "serde", serde(rename = "single-init"))]
    SingleInitialized,
    /// Single qubit on site 1 with an arbitrary wire; a negative control.
    #[cfg_attr(feature = "serde", serde(rename = "single-uninit"))]
    SingleUninitialized,
    /// Measurement-assisted single-qubit transfer with one classical bit.
    #[cfg_attr(feature = "serde", serde(rename = "difranco"))]
    DiFranco,
}

impl ProtocolId {
    pub const ALL: [Self; 4] = [
        Self::TwoQubitCode,
        Self::SingleInitialized,
        Self::SingleUninitialized,
        Self::DiFranco,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::TwoQubitCode => "code2",
            Self::SingleInitialized => "single-init",
            Self::SingleUninitialized => "single-uninit",
            Self::DiFranco => "difranco",
        }
    }

    /// Whether the protocol claims unit fidelity on engineered chains.
    pub fn promises_perfection(&self) -> bool {
        !matches!(self, Self::SingleUninitialized)
    }

    pub fn min_sites(&self) -> usize {
        match self {
            Self::TwoQubitCode => 4,
            Self::SingleInitialized | Self::SingleUninitialized => 2,
            Self::DiFranco => 3,
        }
    }

    /// Number of sites the wire state lives on.
    pub fn wire_sites(&self, n: usize) -> usize {
        match self {
            Self::TwoQubitCode => n - 2,
            _ => n - 1,
        }
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown protocol `{s}`")))
    }
}

/// Extra output of the measurement-assisted protocol.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiFrancoDetails {
    pub receiver_axis: SpinAxis,
    pub corrected: bool,
    pub branches: Vec<BranchReport>,
    /// `Σ p_jk` over the reported branches.
    pub probability_total: f64,
    pub min_branch_fidelity: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransferReport {
    pub protocol: ProtocolId,
    pub spec: ChainSpec,
    pub wire: WireDescriptor,
    pub r_in: BlochVector,
    pub r_out: BlochVector,
    pub fidelity: f64,
    /// Weight outside the receiver code space (zero for single-qubit runs).
    pub leakage: f64,
    /// Evolution time used.
    pub t: f64,
    pub classical_bits: u32,
    pub measurements: u32,
    /// Rotation about z removed from the receiver's Bloch vector, if any.
    pub frame_rotation: Option<f64>,
    pub difranco: Option<DiFrancoDetails>,
}
