use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::QuantumState;
use crate::chain::{hamiltonian_sector, ChainSpec, Sector, DEFAULT_DENSE_MAX_SITES};
use crate::linalg::{CMatrix, CVector, ZERO};
use crate::{Error, Result};

#[derive(Clone, Debug)]
struct Block {
    sector: Sector,
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

/// Exact propagator `U(t) = V exp(-i E t) V†`, block-diagonal over the
/// excitation-number sectors.
#[derive(Clone, Debug)]
pub struct Propagator {
    spec: ChainSpec,
    blocks: Vec<Block>,
}

/// Diagonalize every sector of `spec`. Chains above
/// [`DEFAULT_DENSE_MAX_SITES`] are rejected.
pub fn make_propagator(spec: &ChainSpec) -> Result<Propagator> {
    Propagator::new(spec, DEFAULT_DENSE_MAX_SITES)
}

impl Propagator {
    pub fn new(spec: &ChainSpec, max_sites: usize) -> Result<Self> {
        spec.validate()?;
        if spec.n > max_sites {
            return Err(Error::SizeBudget {
                n: spec.n,
                max: max_sites,
            });
        }
        let blocks = (0..=spec.n)
            .map(|k| {
                let h = hamiltonian_sector(spec, k)?;
                debug_assert!(
                    (&h - h.transpose()).amax() == 0.0,
                    "sector is not symmetric"
                );
                let eig = h.symmetric_eigen();
                Ok(Block {
                    sector: Sector::new(spec.n, k),
                    energies: eig.eigenvalues.iter().copied().collect(),
                    vectors: eig.eigenvectors,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spec: spec.clone(),
            blocks,
        })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn site_count(&self) -> usize {
        self.spec.n
    }

    pub fn dim(&self) -> usize {
        1 << self.spec.n
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self
            .blocks
            .iter()
            .flat_map(|b| b.energies.iter().copied())
            .collect();
        all.sort_by(f64::total_cmp);
        all
    }

    /// Largest `‖H_k V_k - V_k E_k‖_F` over the sectors.
    pub fn residual(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let h = hamiltonian_sector(&self.spec, b.sector.k).expect("validated spec");
                let ve = DMatrix::from_fn(b.vectors.nrows(), b.vectors.ncols(), |r, c| {
                    b.vectors[(r, c)] * b.energies[c]
                });
                (h * &b.vectors - ve).norm()
            })
            .fold(0.0, f64::max)
    }

    fn block_unitaries(&self, t: f64) -> Vec<CMatrix> {
        self.blocks
            .iter()
            .map(|b| {
                let v = b.vectors.map(|x| Complex64::new(x, 0.0));
                let mut scaled = v.clone();
                for (mut col, e) in scaled.column_iter_mut().zip(&b.energies) {
                    col *= Complex64::from_polar(1.0, -e * t);
                }
                scaled * v.transpose()
            })
            .collect()
    }

    /// Dense `U(t)`.
    pub fn unitary(&self, t: f64) -> CMatrix {
        let mut u = CMatrix::zeros(self.dim(), self.dim());
        for (b, ub) in self.blocks.iter().zip(self.block_unitaries(t)) {
            let basis = b.sector.basis();
            for (c, &xc) in basis.iter().enumerate() {
                for (r, &xr) in basis.iter().enumerate() {
                    u[(xr, xc)] = ub[(r, c)];
                }
            }
        }
        u
    }

    /// `U(t) ψ`, computed as `V (e^{-iEt} ⊙ Vᵀ ψ)` per sector.
    pub fn evolve_vector(&self, psi: &CVector, t: f64) -> CVector {
        let mut out = CVector::zeros(psi.len());
        for b in &self.blocks {
            let basis = b.sector.basis();
            let sub = CVector::from_iterator(basis.len(), basis.iter().map(|&x| psi[x]));
            if sub.iter().all(|a| *a == ZERO) {
                continue;
            }
            let d = basis.len();
            let mut coords = CVector::zeros(d);
            for m in 0..d {
                let mut acc = ZERO;
                for r in 0..d {
                    acc += sub[r] * b.vectors[(r, m)];
                }
                coords[m] = acc * Complex64::from_polar(1.0, -b.energies[m] * t);
            }
            for (r, &x) in basis.iter().enumerate() {
                let mut acc = ZERO;
                for m in 0..d {
                    acc += coords[m] * b.vectors[(r, m)];
                }
                out[x] = acc;
            }
        }
        out
    }

    /// `U(t) ρ U(t)†` when `adjoint_first` is false, `U† ρ U` when true.
    fn conjugate_blocks(&self, m: &CMatrix, t: f64, adjoint_first: bool) -> CMatrix {
        let us = self.block_unitaries(t);
        let mut out = CMatrix::zeros(m.nrows(), m.ncols());
        for (a, ua) in self.blocks.iter().zip(&us) {
            let ra = a.sector.basis();
            for (b, ub) in self.blocks.iter().zip(&us) {
                let rb = b.sector.basis();
                let sub = CMatrix::from_fn(ra.len(), rb.len(), |r, c| m[(ra[r], rb[c])]);
                if sub.iter().all(|x| *x == ZERO) {
                    continue;
                }
                let moved = if adjoint_first {
                    ua.adjoint() * sub * ub
                } else {
                    ua * sub * ub.adjoint()
                };
                for (r, &xr) in ra.iter().enumerate() {
                    for (c, &xc) in rb.iter().enumerate() {
                        out[(xr, xc)] = moved[(r, c)];
                    }
                }
            }
        }
        out
    }

    /// `U(t) ρ U(t)†`.
    pub fn evolve_density(&self, rho: &CMatrix, t: f64) -> CMatrix {
        self.conjugate_blocks(rho, t, false)
    }

    /// Schrödinger evolution of a pure or mixed state.
    pub fn evolve(&self, state: &QuantumState, t: f64) -> Result<QuantumState> {
        self.check_dim(state.dim())?;
        Ok(match state {
            QuantumState::Pure { n, psi } => {
                QuantumState::pure_unchecked(*n, self.evolve_vector(psi, t))
            }
            QuantumState::Mixed { n, rho } => {
                QuantumState::mixed_unchecked(*n, self.evolve_density(rho, t))
            }
        })
    }

    /// Heisenberg-picture operator `U(t)† O U(t)`.
    pub fn heisenberg_at(&self, op: &CMatrix, t: f64) -> Result<CMatrix> {
        self.check_dim(op.nrows())?;
        self.check_dim(op.ncols())?;
        Ok(self.conjugate_blocks(op, t, true))
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            })
        }
    }
}

/// Schrödinger evolution; see [`Propagator::evolve`].
pub fn evolve(state: &QuantumState, prop: &Propagator, t: f64) -> Result<QuantumState> {
    prop.evolve(state, t)
}

/// Heisenberg evolution; see [`Propagator::heisenberg_at`].
pub fn heisenberg_at(op: &CMatrix, prop: &Propagator, t: f64) -> Result<CMatrix> {
    prop.heisenberg_at(op, t)
}
