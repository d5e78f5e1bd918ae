use alloc::vec::Vec;

// Only used when std is absent from the build graph.
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::difranco::{
    branch_index, derive_difranco_corrections, raw_branches, BranchReport, DiFrancoCorrections,
    DiFrancoMode, RawBranch,
};
use super::report::{DiFrancoDetails, ProtocolId, TransferReport};
use super::wire::{split, WireStateSpec};
use crate::chain::{ChainSpec, DEFAULT_DENSE_MAX_SITES};
use crate::codes::{
    decode_with_leakage, encode, qubit_fidelity, single_qubit_bloch, single_qubit_density,
    BlochVector, LogicalFrame,
};
use crate::dynamics::{partial_trace, Parity, Propagator, QuantumState};
use crate::linalg::{frobenius_distance, mirror_operator, CMatrix, CVector, ONE};
use crate::{Error, Result};

/// Largest chain evolved as a full density matrix.
pub const DENSITY_MAX_SITES: usize = 10;

/// How mixed inputs are propagated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Route {
    /// Split every mixed input into pure components and evolve vectors.
    #[default]
    Ensemble,
    /// Evolve the full density matrix.
    Density,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingleQubitOptions {
    /// Undo the free-evolution phase on the receiver site.
    pub apply_frame: bool,
}

impl Default for SingleQubitOptions {
    fn default() -> Self {
        Self { apply_frame: true }
    }
}

/// Chain propagator plus everything the protocols derive from it once.
#[derive(Clone, Debug)]
pub struct Simulator {
    prop: Propagator,
    route: Route,
    corrections: Option<DiFrancoCorrections>,
}

type Ensemble = Vec<(f64, QuantumState)>;

impl Simulator {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        let prop = Propagator::new(spec, DEFAULT_DENSE_MAX_SITES)?;
        let corrections = if spec.n >= ProtocolId::DiFranco.min_sites() {
            Some(derive_difranco_corrections(Parity::of(spec.n))?)
        } else {
            None
        };
        Ok(Self {
            prop,
            route: Route::Ensemble,
            corrections,
        })
    }

    pub fn with_route(mut self, route: Route) -> Result<Self> {
        if route == Route::Density && self.prop.site_count() > DENSITY_MAX_SITES {
            return Err(Error::SizeBudget {
                n: self.prop.site_count(),
                max: DENSITY_MAX_SITES,
            });
        }
        self.route = route;
        Ok(self)
    }

    pub fn propagator(&self) -> &Propagator {
        &self.prop
    }

    pub fn spec(&self) -> &ChainSpec {
        self.prop.spec()
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn corrections(&self) -> Option<&DiFrancoCorrections> {
        self.corrections.as_ref()
    }

    fn n(&self) -> usize {
        self.prop.site_count()
    }

    fn require(&self, protocol: ProtocolId) -> Result<()> {
        let n = self.n();
        let min = protocol.min_sites();
        if n >= min {
            Ok(())
        } else if protocol == ProtocolId::TwoQubitCode {
            Err(Error::OverlappingFrames { n })
        } else {
            Err(Error::ChainTooShort { n, min })
        }
    }

    fn components(&self, state: QuantumState) -> Ensemble {
        match self.route {
            Route::Ensemble => split(state),
            Route::Density => {
                let n = state.site_count();
                alloc::vec![(1.0, QuantumState::mixed_unchecked(n, state.density()))]
            }
        }
    }

    fn wire_components(&self, wire: &WireStateSpec, sites: usize) -> Result<Ensemble> {
        match self.route {
            Route::Ensemble => wire.ensemble(sites),
            Route::Density => Ok(self.components(wire.resolve(sites)?)),
        }
    }

    /// `Σ w Tr_rest[U(t) (s ⊗ w) U(t)†]` over `sites`.
    fn reduced_output(
        &self,
        sender: &Ensemble,
        wire: &Ensemble,
        t: f64,
        sites: &[usize],
    ) -> Result<CMatrix> {
        let d = 1usize << sites.len();
        let mut acc = CMatrix::zeros(d, d);
        for (ws, s) in sender {
            for (ww, w) in wire {
                let out = self.prop.evolve(&s.tensor(w), t)?;
                acc += partial_trace(&out, sites)?.density().scale(ws * ww);
            }
        }
        Ok(acc)
    }

    fn base_report(
        &self,
        protocol: ProtocolId,
        wire: &WireStateSpec,
        r: &BlochVector,
        t: f64,
    ) -> TransferReport {
        TransferReport {
            protocol,
            spec: self.spec().clone(),
            wire: wire.descriptor(protocol.wire_sites(self.n())),
            r_in: *r,
            r_out: BlochVector::default(),
            fidelity: 0.0,
            leakage: 0.0,
            t,
            classical_bits: 0,
            measurements: 0,
            frame_rotation: None,
            difranco: None,
        }
    }

    /// Runs `protocol` with its default options, evolving for `t`.
    pub fn run(
        &self,
        protocol: ProtocolId,
        r: &BlochVector,
        wire: &WireStateSpec,
        t: f64,
    ) -> Result<TransferReport> {
        match protocol {
            ProtocolId::TwoQubitCode => self.two_qubit_code_at(r, wire, t),
            ProtocolId::SingleInitialized => self.single_qubit_at(
                protocol,
                r,
                &WireStateSpec::AllDown,
                SingleQubitOptions::default(),
                t,
            ),
            ProtocolId::SingleUninitialized => {
                self.single_qubit_at(protocol, r, wire, SingleQubitOptions::default(), t)
            }
            ProtocolId::DiFranco => self.difranco_at(r, wire, DiFrancoMode::Exhaustive, true, t),
        }
    }

    pub fn two_qubit_code(&self, r: &BlochVector, wire: &WireStateSpec) -> Result<TransferReport> {
        self.two_qubit_code_at(r, wire, self.spec().transfer_time())
    }

    /// Encodes `r` on sites `(1, 2)`, evolves sender plus wire for `t` and
    /// decodes sites `(N-1, N)` in the receiver frame.
    pub fn two_qubit_code_at(
        &self,
        r: &BlochVector,
        wire: &WireStateSpec,
        t: f64,
    ) -> Result<TransferReport> {
        self.require(ProtocolId::TwoQubitCode)?;
        let n = self.n();
        let sender = self.components(QuantumState::mixed_unchecked(2, encode(r)?));
        let wire_parts = self.wire_components(wire, n - 2)?;
        let rho = self.reduced_output(&sender, &wire_parts, t, &[n - 1, n])?;
        let (r_out, leakage) = decode_with_leakage(&rho, &LogicalFrame::receiver(n))?;
        let mut report = self.base_report(ProtocolId::TwoQubitCode, wire, r, t);
        report.fidelity = qubit_fidelity(r, &r_out);
        report.r_out = r_out;
        report.leakage = leakage.max(0.0);
        Ok(report)
    }

    /// Relative phase picked up between `|0…0⟩` and the single excitation
    /// carried from site 1 to site N by `t*`.
    ///
    /// The receiver's Bloch vector comes out rotated by this angle about z.
    pub fn single_qubit_frame(&self) -> f64 {
        let n = self.n();
        let t = self.spec().transfer_time();
        let dim = self.prop.dim();
        let basis = |idx: usize| {
            let mut v = CVector::zeros(dim);
            v[idx] = ONE;
            v
        };
        let vacuum = self.prop.evolve_vector(&basis(0), t)[0];
        let hop = self.prop.evolve_vector(&basis(1 << (n - 1)), t)[1];
        (hop * vacuum.conj()).arg()
    }

    /// Encodes `r` on site 1 next to the wire on sites `2..N` and reads site N.
    pub fn single_qubit_at(
        &self,
        protocol: ProtocolId,
        r: &BlochVector,
        wire: &WireStateSpec,
        options: SingleQubitOptions,
        t: f64,
    ) -> Result<TransferReport> {
        if !matches!(
            protocol,
            ProtocolId::SingleInitialized | ProtocolId::SingleUninitialized
        ) {
            return Err(Error::InvalidParameter(alloc::format!(
                "{protocol} is not a single-qubit protocol"
            )));
        }
        self.require(protocol)?;
        let n = self.n();
        let sender = self.components(QuantumState::mixed_unchecked(1, single_qubit_density(r)?));
        let wire_parts = self.wire_components(wire, n - 1)?;
        let rho = self.reduced_output(&sender, &wire_parts, t, &[n])?;
        let raw = single_qubit_bloch(&rho);
        let mut report = self.base_report(protocol, wire, r, t);
        report.r_out = if options.apply_frame {
            let theta = self.single_qubit_frame();
            report.frame_rotation = Some(theta);
            rotate_z(&raw, -theta)
        } else {
            raw
        };
        report.fidelity = qubit_fidelity(r, &report.r_out);
        Ok(report)
    }

    pub fn difranco(
        &self,
        r: &BlochVector,
        wire: &WireStateSpec,
        mode: DiFrancoMode,
    ) -> Result<TransferReport> {
        self.difranco_at(r, wire, mode, true, self.spec().transfer_time())
    }

    /// Receiver measures its derived axis on site N, the sender places `r`
    /// on site 1, the chain evolves for `t`, the sender measures x and sends
    /// `k`, and the receiver applies the `(j, k)` correction when `correct`.
    pub fn difranco_at(
        &self,
        r: &BlochVector,
        wire: &WireStateSpec,
        mode: DiFrancoMode,
        correct: bool,
        t: f64,
    ) -> Result<TransferReport> {
        self.require(ProtocolId::DiFranco)?;
        let corrections = self.corrections.as_ref().ok_or(Error::ChainTooShort {
            n: self.n(),
            min: 3,
        })?;
        let n = self.n();
        let sender = self.components(QuantumState::mixed_unchecked(1, single_qubit_density(r)?));
        let wire_parts = self.wire_components(wire, n - 1)?;
        let raw = raw_branches(
            &self.prop,
            &sender,
            &wire_parts,
            corrections.receiver_axis,
            t,
        )?;
        let reports: Vec<BranchReport> = raw
            .iter()
            .map(|b| branch_report(b, r, corrections, correct))
            .collect();

        let chosen: Vec<BranchReport> = match mode {
            DiFrancoMode::Exhaustive => reports
                .into_iter()
                .filter(|b| b.probability > 0.0)
                .collect(),
            DiFrancoMode::Forced { j, k } => {
                for v in [j, k] {
                    if (v.abs() - 0.5).abs() > 1e-12 {
                        return Err(Error::InvalidParameter(alloc::format!(
                            "outcome {v} is not ±1/2"
                        )));
                    }
                }
                let b = &reports[2 * branch_index(j) + branch_index(k)];
                if b.probability <= 0.0 {
                    return Err(Error::ZeroProbabilityOutcome { outcome: k });
                }
                alloc::vec![b.clone()]
            }
            DiFrancoMode::Sampled { seed } => {
                let draw: f64 = ChaCha8Rng::seed_from_u64(seed).random();
                let mut acc = 0.0;
                let total: f64 = reports.iter().map(|b| b.probability).sum();
                let pick = reports
                    .iter()
                    .position(|b| {
                        acc += b.probability / total;
                        draw < acc
                    })
                    .unwrap_or(reports.len() - 1);
                alloc::vec![reports[pick].clone()]
            }
        };

        let total: f64 = chosen.iter().map(|b| b.probability).sum();
        let mut r_out = [0.0; 3];
        let mut fidelity = 0.0;
        for b in &chosen {
            let w = b.probability / total;
            for (acc, v) in r_out.iter_mut().zip(b.r_out.to_array()) {
                *acc += w * v;
            }
            fidelity += w * b.fidelity;
        }
        let mut report = self.base_report(ProtocolId::DiFranco, wire, r, t);
        report.r_out = r_out.into();
        report.fidelity = fidelity.clamp(0.0, 1.0);
        report.measurements = 2;
        report.classical_bits = 1;
        report.difranco = Some(DiFrancoDetails {
            receiver_axis: corrections.receiver_axis,
            corrected: correct,
            min_branch_fidelity: chosen.iter().map(|b| b.fidelity).fold(1.0, f64::min),
            probability_total: total,
            branches: chosen,
        });
        Ok(report)
    }

    /// `‖σ − R(σ')‖_F` between the code-protocol wire on sites `3..N` and its
    /// output on sites `1..N-2`, with the output site order reversed.
    pub fn wire_disturbance(&self, r: &BlochVector, wire: &WireStateSpec) -> Result<f64> {
        self.require(ProtocolId::TwoQubitCode)?;
        let n = self.n();
        let sigma = wire.resolve(n - 2)?.density();
        let sender = self.components(QuantumState::mixed_unchecked(2, encode(r)?));
        let wire_parts = self.wire_components(wire, n - 2)?;
        let sites: Vec<usize> = (1..=n - 2).collect();
        let out = self.reduced_output(&sender, &wire_parts, self.spec().transfer_time(), &sites)?;
        Ok(frobenius_distance(&sigma, &mirror_operator(&out, n - 2)))
    }
}

fn branch_report(
    b: &RawBranch,
    r: &BlochVector,
    corrections: &DiFrancoCorrections,
    correct: bool,
) -> BranchReport {
    let rho = if correct {
        let u = corrections.unitary(b.j, b.k);
        u * &b.rho * u.adjoint()
    } else {
        b.rho.clone()
    };
    let r_out = single_qubit_bloch(&rho);
    BranchReport {
        j: b.j,
        k: b.k,
        probability: b.probability,
        r_out,
        fidelity: if b.probability > 0.0 {
            qubit_fidelity(r, &r_out)
        } else {
            0.0
        },
        correction: correct.then(|| *corrections.rotation(b.j, b.k)),
    }
}

fn rotate_z(r: &BlochVector, theta: f64) -> BlochVector {
    let (s, c) = theta.sin_cos();
    BlochVector::new(c * r.x - s * r.y, s * r.x + c * r.y, r.z)
}

pub fn transfer_two_qubit_code(
    spec: &ChainSpec,
    r: &BlochVector,
    wire: &WireStateSpec,
) -> Result<TransferReport> {
    Simulator::new(spec)?.two_qubit_code(r, wire)
}

pub fn transfer_single_qubit_initialized(
    spec: &ChainSpec,
    r: &BlochVector,
) -> Result<TransferReport> {
    let sim = Simulator::new(spec)?;
    let t = spec.transfer_time();
    sim.single_qubit_at(
        ProtocolId::SingleInitialized,
        r,
        &WireStateSpec::AllDown,
        SingleQubitOptions::default(),
        t,
    )
}

pub fn transfer_single_qubit_uninitialized(
    spec: &ChainSpec,
    r: &BlochVector,
    wire: &WireStateSpec,
) -> Result<TransferReport> {
    let sim = Simulator::new(spec)?;
    let t = spec.transfer_time();
    sim.single_qubit_at(
        ProtocolId::SingleUninitialized,
        r,
        wire,
        SingleQubitOptions::default(),
        t,
    )
}

/// `forced_outcomes = None` enumerates all four branches.
pub fn transfer_difranco(
    spec: &ChainSpec,
    r: &BlochVector,
    wire: &WireStateSpec,
    forced_outcomes: Option<(f64, f64)>,
) -> Result<TransferReport> {
    let mode = match forced_outcomes {
        Some((j, k)) => DiFrancoMode::Forced { j, k },
        None => DiFrancoMode::Exhaustive,
    };
    Simulator::new(spec)?.difranco(r, wire, mode)
}

/// Fidelity of `protocol` after evolving for each time in `t_grid`.
pub fn fidelity_scan(
    spec: &ChainSpec,
    protocol: ProtocolId,
    r: &BlochVector,
    wire: &WireStateSpec,
    t_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("time grid is empty".into()));
    }
    let sim = Simulator::new(spec)?;
    t_grid
        .iter()
        .map(|&t| Ok((t, sim.run(protocol, r, wire, t)?.fidelity)))
        .collect()
}
