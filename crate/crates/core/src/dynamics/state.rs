use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{
    extract, hermitian_eigen, hermiticity_defect, kron, outer, trace, CMatrix, CVector, ZERO,
};
use crate::{Error, Result};

const NORM_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// Pure or mixed state of an `n`-site register in the crate basis.
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Pure { n: usize, psi: CVector },
    Mixed { n: usize, rho: CMatrix },
}

impl QuantumState {
    /// Validated pure state: `‖ψ‖ = 1` within `1e-12`.
    pub fn pure(n: usize, psi: CVector) -> Result<Self> {
        check_dim(n, psi.len())?;
        let norm = psi.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm {norm} is not 1")));
        }
        Ok(Self::Pure { n, psi })
    }

    /// Validated density matrix: Hermitian, unit trace within `1e-12` and
    /// no eigenvalue below `-1e-10`.
    pub fn mixed(n: usize, rho: CMatrix) -> Result<Self> {
        check_dim(n, rho.nrows())?;
        check_dim(n, rho.ncols())?;
        let defect = hermiticity_defect(&rho);
        if defect > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = trace(&rho);
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let (values, _) = hermitian_eigen(&rho);
        if values[0] < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:.3e}",
                values[0]
            )));
        }
        Ok(Self::Mixed { n, rho })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Self {
        let mut psi = CVector::zeros(1 << n);
        psi[index] = crate::linalg::ONE;
        Self::Pure { n, psi }
    }

    pub(crate) fn pure_unchecked(n: usize, psi: CVector) -> Self {
        Self::Pure { n, psi }
    }

    pub(crate) fn mixed_unchecked(n: usize, rho: CMatrix) -> Self {
        Self::Mixed { n, rho }
    }

    pub fn site_count(&self) -> usize {
        match self {
            Self::Pure { n, .. } | Self::Mixed { n, .. } => *n,
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.site_count()
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, Self::Pure { .. })
    }

    /// Density matrix (`|ψ⟩⟨ψ|` for pure states).
    pub fn density(&self) -> CMatrix {
        match self {
            Self::Pure { psi, .. } => outer(psi),
            Self::Mixed { rho, .. } => rho.clone(),
        }
    }

    /// `Tr ρ` (or `‖ψ‖²`).
    pub fn trace(&self) -> f64 {
        match self {
            Self::Pure { psi, .. } => psi.norm_squared(),
            Self::Mixed { rho, .. } => trace(rho).re,
        }
    }

    /// `Re Tr[ρ O]`.
    pub fn expectation(&self, op: &CMatrix) -> Result<f64> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: op.nrows(),
            });
        }
        Ok(match self {
            Self::Pure { psi, .. } => psi.dotc(&(op * psi)).re,
            Self::Mixed { rho, .. } => crate::linalg::expectation(rho, op),
        })
    }

    /// `self ⊗ other`, with `self` on the leading sites.
    pub fn tensor(&self, other: &Self) -> Self {
        let n = self.site_count() + other.site_count();
        match (self, other) {
            (Self::Pure { psi: a, .. }, Self::Pure { psi: b, .. }) => Self::Pure {
                n,
                psi: a.kronecker(b),
            },
            _ => Self::Mixed {
                n,
                rho: kron(&self.density(), &other.density()),
            },
        }
    }
}

fn check_dim(n: usize, len: usize) -> Result<()> {
    if n >= usize::BITS as usize || len != 1 << n {
        return Err(Error::DimensionMismatch {
            expected: 1usize.checked_shl(n as u32).unwrap_or(0),
            got: len,
        });
    }
    Ok(())
}

fn normalize_sites(n: usize, keep: &[usize]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::EmptySiteSet);
    }
    let mut sites = keep.to_vec();
    sites.sort_unstable();
    sites.dedup();
    if let Some(&bad) = sites.iter().find(|&&s| s == 0 || s > n) {
        return Err(Error::SiteOutOfRange { site: bad, n });
    }
    Ok(sites)
}

/// Reduced density matrix on `keep`, ordered by ascending site.
pub fn partial_trace(state: &QuantumState, keep: &[usize]) -> Result<QuantumState> {
    let n = state.site_count();
    let keep = normalize_sites(n, keep)?;
    let env: Vec<usize> = (1..=n).filter(|s| !keep.contains(s)).collect();
    let dk = 1usize << keep.len();
    let de = 1usize << env.len();
    let rho = match state {
        QuantumState::Pure { psi, .. } => {
            let mut m = CMatrix::zeros(dk, de);
            for (x, amp) in psi.iter().enumerate() {
                m[(extract(n, &keep, x), extract(n, &env, x))] = *amp;
            }
            &m * m.adjoint()
        }
        QuantumState::Mixed { rho, .. } => {
            let mut out = CMatrix::from_element(dk, dk, ZERO);
            for r in 0..rho.nrows() {
                let er = extract(n, &env, r);
                let kr = extract(n, &keep, r);
                for c in 0..rho.ncols() {
                    if extract(n, &env, c) == er {
                        out[(kr, extract(n, &keep, c))] += rho[(r, c)];
                    }
                }
            }
            out
        }
    };
    Ok(QuantumState::mixed_unchecked(keep.len(), rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_distance, ONE};
    use num_complex::Complex64;

    fn bell() -> QuantumState {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let psi = CVector::from_vec(alloc::vec![
            Complex64::new(h, 0.0),
            ZERO,
            ZERO,
            Complex64::new(h, 0.0)
        ]);
        QuantumState::pure(2, psi).unwrap()
    }

    #[test]
    fn bell_pair_reduces_to_maximally_mixed() {
        for keep in [[1], [2]] {
            let r = partial_trace(&bell(), &keep).unwrap().density();
            assert!(frobenius_distance(&r, &CMatrix::identity(2, 2).scale(0.5)) < 1e-15);
        }
    }

    #[test]
    fn product_states_factor() {
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.7, 0.0),
                Complex64::new(0.1, 0.2),
                Complex64::new(0.1, -0.2),
                Complex64::new(0.3, 0.0),
            ],
        );
        let b = bell().density();
        let full = QuantumState::mixed(3, kron(&a, &b)).unwrap();
        let ra = partial_trace(&full, &[1]).unwrap().density();
        assert!(frobenius_distance(&ra, &a) < 1e-15);
        let rb = partial_trace(&full, &[3, 2]).unwrap().density();
        assert!(frobenius_distance(&rb, &b) < 1e-15);
        let pure_path = partial_trace(&bell().tensor(&QuantumState::basis(1, 0)), &[1, 2]).unwrap();
        assert!(frobenius_distance(&pure_path.density(), &b) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        assert_eq!(partial_trace(&bell(), &[]), Err(Error::EmptySiteSet));
        assert_eq!(
            partial_trace(&bell(), &[3]),
            Err(Error::SiteOutOfRange { site: 3, n: 2 })
        );
    }

    #[test]
    fn state_validation() {
        let psi = CVector::from_element(2, ONE);
        assert!(QuantumState::pure(1, psi).is_err());
        assert!(QuantumState::pure(2, CVector::from_element(2, ONE)).is_err());
        let not_psd = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.5, 0.0),
                ZERO,
                ZERO,
                Complex64::new(-0.5, 0.0),
            ],
        );
        assert!(QuantumState::mixed(1, not_psd).is_err());
        assert!(QuantumState::mixed(1, CMatrix::identity(2, 2).scale(0.5)).is_ok());
    }
}
