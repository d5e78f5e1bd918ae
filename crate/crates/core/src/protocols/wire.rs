use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
// Only used when std is absent from the build graph.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::codes::BlochVector;
use crate::dynamics::QuantumState;
use crate::linalg::{hermitian_eigen, CMatrix, CVector};
use crate::{Error, Result};

/// Eigenvalues below this are dropped when a mixed state is split into an
/// ensemble of pure states.
const ENSEMBLE_CUTOFF: f64 = 1e-14;

/// How the sites between sender and receiver (or after the sender qubit) are
/// prepared.
#[derive(Clone, Debug, PartialEq)]
pub enum WireStateSpec {
    /// `|00…0⟩`.
    AllDown,
    /// Haar-random pure state.
    RandomPure {
        seed: u64,
    },
    /// `G G† / Tr(G G†)` with `G` a `d × rank` complex Gaussian matrix.
    RandomMixed {
        seed: u64,
        rank: usize,
    },
    Explicit(QuantumState),
}

/// Serializable summary of a [`WireStateSpec`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WireDescriptor {
    pub kind: String,
    pub sites: usize,
    pub seed: Option<u64>,
    pub rank: Option<usize>,
}

impl fmt::Display for WireStateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::AllDown => f.write_str("all-down"),
            Self::RandomPure { seed } => write!(f, "random-pure(seed={seed})"),
            Self::RandomMixed { seed, rank } => write!(f, "random-mixed(seed={seed}, rank={rank})"),
            Self::Explicit(_) => f.write_str("explicit"),
        }
    }
}

/// Uniformly distributed point on the Bloch sphere.
pub fn random_bloch<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 1e-9 {
            return BlochVector::new(v[0] / norm, v[1] / norm, v[2] / norm);
        }
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

/// Haar-random unit vector of dimension `dim`.
pub fn random_pure_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(dim, |_, _| gaussian(rng));
    let norm = v.norm();
    v.unscale(norm)
}

/// Unnormalized Wishart factor `G` with `rank` columns.
fn wishart_factor<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Result<CMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::InvalidParameter(format!(
            "rank {rank} must lie in 1..={dim}"
        )));
    }
    Ok(CMatrix::from_fn(dim, rank, |_, _| gaussian(rng)))
}

impl WireStateSpec {
    /// Summary for reports.
    pub fn descriptor(&self, sites: usize) -> WireDescriptor {
        let (kind, seed, rank) = match self {
            Self::AllDown => ("all-down", None, None),
            Self::RandomPure { seed } => ("random-pure", Some(*seed), None),
            Self::RandomMixed { seed, rank } => ("random-mixed", Some(*seed), Some(*rank)),
            Self::Explicit(_) => ("explicit", None, None),
        };
        WireDescriptor {
            kind: kind.into(),
            sites,
            seed,
            rank,
        }
    }

    /// The wire as a state on `sites` qubits.
    pub fn resolve(&self, sites: usize) -> Result<QuantumState> {
        let dim = 1usize << sites;
        match self {
            Self::AllDown => Ok(QuantumState::basis(sites, 0)),
            Self::RandomPure { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok(QuantumState::pure_unchecked(
                    sites,
                    random_pure_vector(dim, &mut rng),
                ))
            }
            Self::RandomMixed { seed, rank } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let g = wishart_factor(dim, *rank, &mut rng)?;
                let rho = &g * g.adjoint();
                let tr = g.norm_squared();
                Ok(QuantumState::mixed_unchecked(sites, rho.unscale(tr)))
            }
            Self::Explicit(state) => {
                if state.site_count() != sites {
                    return Err(Error::SiteCountMismatch {
                        left: sites,
                        right: state.site_count(),
                    });
                }
                Ok(state.clone())
            }
        }
    }

    /// Weighted pure states whose mixture is [`resolve`](Self::resolve).
    pub(crate) fn ensemble(&self, sites: usize) -> Result<Vec<(f64, QuantumState)>> {
        match self {
            Self::RandomMixed { seed, rank } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let g = wishart_factor(1usize << sites, *rank, &mut rng)?;
                let tr = g.norm_squared();
                Ok(g.column_iter()
                    .map(|col| {
                        let w = col.norm_squared();
                        (
                            w / tr,
                            QuantumState::pure_unchecked(sites, col.unscale(w.sqrt())),
                        )
                    })
                    .collect())
            }
            _ => Ok(split(self.resolve(sites)?)),
        }
    }
}

/// Mixture decomposition of any state into pure components.
pub(crate) fn split(state: QuantumState) -> Vec<(f64, QuantumState)> {
    match state {
        QuantumState::Pure { .. } => alloc::vec![(1.0, state)],
        QuantumState::Mixed { n, rho } => {
            let (values, vectors) = hermitian_eigen(&rho);
            values
                .iter()
                .zip(vectors.column_iter())
                .filter(|(&p, _)| p > ENSEMBLE_CUTOFF)
                .map(|(&p, v)| (p, QuantumState::pure_unchecked(n, v.into_owned())))
                .collect()
        }
    }
}
