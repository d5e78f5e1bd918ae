//! Chain specifications, engineered couplings, dense and magnetization-sector
//! Hamiltonians, and the spectrum parity matching check.
//!
//! The Hamiltonian is
//! `H = Σ_i J_i (X_i X_{i+1} + Y_i Y_{i+1}) + B Σ_i Z_i` with spin-½
//! operators, so a hop between neighbouring sites has amplitude `J_i / 2` and
//! a basis state with `k` excitations has field energy `B (n - 2k) / 2`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
// Only used when std is absent from the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{site_mask, site_reversal, CMatrix};
use crate::{Error, Result};

/// Largest chain for which full `2^n × 2^n` matrices are built by default.
pub const DEFAULT_DENSE_MAX_SITES: usize = 14;

/// Coupling profile along the chain.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CouplingProfile {
    /// `J_i = J √(i (n - i))`.
    Engineered,
    /// Explicit list of `n - 1` couplings.
    Custom(Vec<f64>),
}

/// A concrete xx chain.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainSpec {
    /// Number of sites.
    pub n: usize,
    /// Global coupling `J`; fixes the transfer time `π / J` for every profile.
    pub j: f64,
    /// Uniform magnetic field `B`.
    pub b: f64,
    pub profile: CouplingProfile,
}

/// `J √(i (n - i))` for `i = 1..n-1`.
pub fn couplings_engineered(n: usize, j: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::ChainTooShort { n, min: 2 });
    }
    if !(j > 0.0 && j.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "coupling J = {j} must be positive"
        )));
    }
    Ok((1..n).map(|i| j * ((i * (n - i)) as f64).sqrt()).collect())
}

impl ChainSpec {
    pub fn engineered(n: usize, j: f64) -> Result<Self> {
        let spec = Self {
            n,
            j,
            b: 0.0,
            profile: CouplingProfile::Engineered,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Explicit couplings with the time scale `J = 1`.
    pub fn custom(n: usize, couplings: Vec<f64>) -> Result<Self> {
        let spec = Self {
            n,
            j: 1.0,
            b: 0.0,
            profile: CouplingProfile::Custom(couplings),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// All couplings equal to `j`.
    pub fn uniform(n: usize, j: f64) -> Result<Self> {
        let mut spec = Self::custom(n, alloc::vec![j; n.saturating_sub(1)])?;
        spec.j = j;
        spec.validate()?;
        Ok(spec)
    }

    #[must_use]
    pub fn with_field(mut self, b: f64) -> Self {
        self.b = b;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::ChainTooShort { n: self.n, min: 2 });
        }
        if self.n > 62 {
            return Err(Error::InvalidParameter(format!(
                "chains longer than 62 sites are not indexable (n = {})",
                self.n
            )));
        }
        if !(self.j > 0.0 && self.j.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coupling J = {} must be positive",
                self.j
            )));
        }
        if !self.b.is_finite() {
            return Err(Error::InvalidParameter("field B must be finite".into()));
        }
        if let CouplingProfile::Custom(c) = &self.profile {
            if c.len() != self.n - 1 {
                return Err(Error::CouplingCount {
                    expected: self.n - 1,
                    got: c.len(),
                });
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter("couplings must be finite".into()));
            }
        }
        Ok(())
    }

    /// Numeric couplings `J_1..J_{n-1}`.
    pub fn couplings(&self) -> Vec<f64> {
        match &self.profile {
            CouplingProfile::Engineered => {
                couplings_engineered(self.n, self.j).expect("validated spec")
            }
            CouplingProfile::Custom(c) => c.clone(),
        }
    }

    /// `t* = π / J`.
    pub fn transfer_time(&self) -> f64 {
        PI / self.j
    }

    pub fn is_engineered(&self) -> bool {
        self.profile == CouplingProfile::Engineered
    }

    /// `J_i = J_{n-i}` within `tol` relative to the largest coupling.
    pub fn is_mirror_symmetric(&self, tol: f64) -> bool {
        let c = self.couplings();
        let scale = c.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        (0..c.len()).all(|k| (c[k] - c[c.len() - 1 - k]).abs() <= tol * scale)
    }
}

/// Basis states of an `n`-site register with exactly `k` excitations, in
/// ascending index order.
#[derive(Clone, Debug)]
pub struct Sector {
    pub n: usize,
    pub k: usize,
    basis: Vec<usize>,
}

impl Sector {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(k <= n && n < usize::BITS as usize);
        let mut basis = Vec::new();
        if k == 0 {
            basis.push(0);
        } else {
            // Gosper's hack walks k-subsets in increasing order
            let limit = 1usize << n;
            let mut x = (1usize << k) - 1;
            while x < limit {
                basis.push(x);
                let c = x & x.wrapping_neg();
                let r = x + c;
                x = (((r ^ x) >> 2) / c) | r;
            }
        }
        Self { n, k, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn position(&self, index: usize) -> Option<usize> {
        self.basis.binary_search(&index).ok()
    }
}

fn sector_matrix(spec: &ChainSpec, sector: &Sector) -> DMatrix<f64> {
    let n = spec.n;
    let couplings = spec.couplings();
    let diag = spec.b * (n as f64 - 2.0 * sector.k as f64) / 2.0;
    let mut h = DMatrix::<f64>::zeros(sector.dim(), sector.dim());
    for (col, &x) in sector.basis().iter().enumerate() {
        h[(col, col)] = diag;
        for (bond, &jb) in couplings.iter().enumerate() {
            let pair = site_mask(n, bond + 1) | site_mask(n, bond + 2);
            let bits = x & pair;
            if bits != 0 && bits != pair {
                let row = sector.position(x ^ pair).expect("hop stays in sector");
                h[(row, col)] += jb / 2.0;
            }
        }
    }
    h
}

/// Restriction of `H` to the `k`-excitation sector, in [`Sector`] order.
pub fn hamiltonian_sector(spec: &ChainSpec, k: usize) -> Result<DMatrix<f64>> {
    spec.validate()?;
    if k > spec.n {
        return Err(Error::InvalidParameter(format!(
            "sector k = {k} exceeds n = {}",
            spec.n
        )));
    }
    Ok(sector_matrix(spec, &Sector::new(spec.n, k)))
}

/// Full `2^n × 2^n` Hamiltonian, capped at [`DEFAULT_DENSE_MAX_SITES`].
pub fn hamiltonian_dense(spec: &ChainSpec) -> Result<CMatrix> {
    hamiltonian_dense_with_budget(spec, DEFAULT_DENSE_MAX_SITES)
}

pub fn hamiltonian_dense_with_budget(spec: &ChainSpec, max_sites: usize) -> Result<CMatrix> {
    spec.validate()?;
    if spec.n > max_sites {
        return Err(Error::SizeBudget {
            n: spec.n,
            max: max_sites,
        });
    }
    let dim = 1usize << spec.n;
    let mut h = CMatrix::zeros(dim, dim);
    for k in 0..=spec.n {
        let sector = Sector::new(spec.n, k);
        let block = sector_matrix(spec, &sector);
        for (c, &xc) in sector.basis().iter().enumerate() {
            for (r, &xr) in sector.basis().iter().enumerate() {
                h[(xr, xc)].re = block[(r, c)];
            }
        }
    }
    Ok(h)
}

/// Outcome of [`spmc_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SpmcStatus {
    Pass,
    Fail,
    /// The couplings are not mirror symmetric, so parity is undefined.
    NotApplicable,
}

/// One-excitation spectrum with mirror parities and the integer level fit.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumReport {
    pub n: usize,
    pub status: SpmcStatus,
    pub spmc_pass: bool,
    pub tolerance: f64,
    /// Ascending one-excitation energies.
    pub eigenvalues: Vec<f64>,
    /// `⟨v|R|v⟩` rounded to ±1 per eigenvector, 0 when it is neither.
    pub parities: Vec<i8>,
    /// Integer labels `m_k` with `E_k ≈ offset + spacing · m_k`.
    pub levels: Vec<i64>,
    pub offset: f64,
    pub spacing: f64,
    /// Largest `|E_k - offset - spacing · m_k|`.
    pub max_fit_residual: f64,
    pub spacing_min: f64,
    pub spacing_max: f64,
    pub spacing_mean: f64,
}

const PARITY_TOL: f64 = 1e-6;

/// Spectrum parity matching check on the one-excitation sector.
///
/// The ascending eigenvalues are least-squares fitted to `a + b k`, rounded to
/// integer levels, and the parity of each level must track the mirror parity
/// of its eigenvector (a global flip is allowed, since the additive constant
/// is free).
pub fn spmc_check(spec: &ChainSpec, tol: f64) -> Result<SpectrumReport> {
    spec.validate()?;
    let n = spec.n;
    let sector = Sector::new(n, 1);
    let eig = sector_matrix(spec, &sector).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();

    let gaps: Vec<f64> = eigenvalues.windows(2).map(|w| w[1] - w[0]).collect();
    let spacing_min = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let spacing_max = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spacing_mean = gaps.iter().sum::<f64>() / gaps.len() as f64;

    // least squares E_k = a + b k
    let m = n as f64;
    let kbar = (m - 1.0) / 2.0;
    let ebar = eigenvalues.iter().sum::<f64>() / m;
    let sxx: f64 = (0..n).map(|k| (k as f64 - kbar).powi(2)).sum();
    let sxy: f64 = (0..n)
        .map(|k| (k as f64 - kbar) * (eigenvalues[k] - ebar))
        .sum();
    let spacing = sxy / sxx;
    let offset = ebar - spacing * kbar;
    let levels: Vec<i64> = eigenvalues
        .iter()
        .map(|e| ((e - offset) / spacing).round() as i64)
        .collect();
    let max_fit_residual = eigenvalues
        .iter()
        .zip(&levels)
        .map(|(e, &l)| (e - offset - spacing * l as f64).abs())
        .fold(0.0, f64::max);

    let mut report = SpectrumReport {
        n,
        status: SpmcStatus::NotApplicable,
        spmc_pass: false,
        tolerance: tol,
        eigenvalues,
        parities: Vec::new(),
        levels,
        offset,
        spacing,
        max_fit_residual,
        spacing_min,
        spacing_max,
        spacing_mean,
    };
    if !spec.is_mirror_symmetric(tol) {
        return Ok(report);
    }

    let reversal = site_reversal(n);
    let mirror: Vec<usize> = sector
        .basis()
        .iter()
        .map(|&x| sector.position(reversal[x]).expect("reversal preserves k"))
        .collect();
    report.parities = order
        .iter()
        .map(|&col| {
            let v = eig.eigenvectors.column(col);
            let p: f64 = (0..n).map(|r| v[r] * v[mirror[r]]).sum();
            if (p - 1.0).abs() < PARITY_TOL {
                1
            } else if (p + 1.0).abs() < PARITY_TOL {
                -1
            } else {
                0
            }
        })
        .collect();

    let level_parity = |l: i64| if l.rem_euclid(2) == 0 { 1i8 } else { -1 };
    let relative: Vec<i8> = report
        .parities
        .iter()
        .zip(&report.levels)
        .map(|(&p, &l)| p * level_parity(l))
        .collect();
    let parities_match = relative.iter().all(|&r| r != 0 && r == relative[0]);
    let fit_ok = max_fit_residual <= tol;
    report.spmc_pass = parities_match && fit_ok;
    report.status = if report.spmc_pass {
        SpmcStatus::Pass
    } else {
        SpmcStatus::Fail
    };
    Ok(report)
}
