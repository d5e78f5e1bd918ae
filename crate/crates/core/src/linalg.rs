//! Dense complex linear algebra helpers over `nalgebra`.
//!
//! Basis indices follow the crate-wide convention: on an `n`-site register,
//! site `s` (1-based) is bit `n - s` of the index, so site 1 is the most
//! significant bit.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Bit mask of `site` (1-based) in an `n`-site basis index.
#[inline]
pub fn site_mask(n: usize, site: usize) -> usize {
    1 << (n - site)
}

/// Pauli σ-matrices, `[σx, σy, σz]`.
pub fn sigma() -> [CMatrix; 3] {
    [
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

/// Spin-½ components `σ/2`.
pub fn spin() -> [CMatrix; 3] {
    sigma().map(|s| s.scale(0.5))
}

/// Kronecker product with the left factor on the more significant sites.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `ab - ba`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Frobenius norm of `a - b`.
pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

/// Largest entry of `|a - a†|`.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..a.nrows() {
        for c in r..a.ncols() {
            worst = worst.max((a[(r, c)] - a[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Trace of a square matrix.
pub fn trace(a: &CMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

/// `Re Tr[ρ O]` without forming the product.
pub fn expectation(rho: &CMatrix, op: &CMatrix) -> f64 {
    let mut acc = ZERO;
    for r in 0..rho.nrows() {
        for c in 0..rho.ncols() {
            acc += rho[(r, c)] * op[(c, r)];
        }
    }
    acc.re
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending with
/// matching eigenvector columns.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = a.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(a.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// Scatter bits of `local` (most significant first) onto `sites` of an
/// `n`-site index.
pub(crate) fn deposit(n: usize, sites: &[usize], local: usize) -> usize {
    let k = sites.len();
    sites.iter().enumerate().fold(0, |acc, (pos, &s)| {
        if local >> (k - 1 - pos) & 1 == 1 {
            acc | site_mask(n, s)
        } else {
            acc
        }
    })
}

/// Gather the bits of `sites` from a full index into a local index; the first
/// listed site becomes the most significant bit.
pub(crate) fn extract(n: usize, sites: &[usize], full: usize) -> usize {
    sites.iter().fold(0, |acc, &s| {
        (acc << 1) | usize::from(full & site_mask(n, s) != 0)
    })
}

/// Enumerate all full indices whose bits on `sites` are zero.
pub(crate) fn complement_indices(n: usize, sites: &[usize]) -> Vec<usize> {
    let mask = sites.iter().fold(0, |m, &s| m | site_mask(n, s));
    (0..1usize << n).filter(|x| x & mask == 0).collect()
}

/// Embed a `2^k × 2^k` operator acting on `sites` (in the listed qubit order)
/// into the `n`-site register, identity elsewhere.
pub fn embed(op: &CMatrix, sites: &[usize], n: usize) -> CMatrix {
    let k = sites.len();
    assert_eq!(
        op.nrows(),
        1 << k,
        "operator dimension does not match site list"
    );
    let dim = 1usize << n;
    let locals: Vec<usize> = (0..1usize << k).map(|a| deposit(n, sites, a)).collect();
    let mut out = CMatrix::zeros(dim, dim);
    for env in complement_indices(n, sites) {
        for (a, &da) in locals.iter().enumerate() {
            for (b, &db) in locals.iter().enumerate() {
                let v = op[(a, b)];
                if v != ZERO {
                    out[(env | da, env | db)] = v;
                }
            }
        }
    }
    out
}

/// Index permutation implementing the site reversal `s ↦ n + 1 - s`.
pub fn site_reversal(n: usize) -> Vec<usize> {
    (0..1usize << n)
        .map(|x| x.reverse_bits() >> (usize::BITS as usize - n))
        .collect()
}

/// `R A R` for the site-reversal permutation `R`.
pub fn mirror_operator(a: &CMatrix, n: usize) -> CMatrix {
    let perm = site_reversal(n);
    CMatrix::from_fn(a.nrows(), a.ncols(), |r, c| a[(perm[r], perm[c])])
}

/// `|ψ⟩⟨ψ|`.
pub fn outer(psi: &CVector) -> CMatrix {
    psi * psi.adjoint()
}

/// `A ψ` for a `2 × 2` operator `A` acting on one site.
pub fn apply_site_vector(op: &CMatrix, site: usize, n: usize, psi: &CVector) -> CVector {
    let bit = site_mask(n, site);
    let mut out = psi.clone();
    for x in (0..psi.len()).filter(|x| x & bit == 0) {
        let (a0, a1) = (psi[x], psi[x | bit]);
        out[x] = op[(0, 0)] * a0 + op[(0, 1)] * a1;
        out[x | bit] = op[(1, 0)] * a0 + op[(1, 1)] * a1;
    }
    out
}

/// `A ρ A†` for a `2 × 2` operator `A` acting on one site.
pub fn conjugate_site(op: &CMatrix, site: usize, n: usize, rho: &CMatrix) -> CMatrix {
    let bit = site_mask(n, site);
    let dim = rho.nrows();
    let mut left = rho.clone();
    for c in 0..dim {
        for x in (0..dim).filter(|x| x & bit == 0) {
            let (a0, a1) = (rho[(x, c)], rho[(x | bit, c)]);
            left[(x, c)] = op[(0, 0)] * a0 + op[(0, 1)] * a1;
            left[(x | bit, c)] = op[(1, 0)] * a0 + op[(1, 1)] * a1;
        }
    }
    let adj = op.adjoint();
    let mut out = left.clone();
    for r in 0..dim {
        for x in (0..dim).filter(|x| x & bit == 0) {
            let (a0, a1) = (left[(r, x)], left[(r, x | bit)]);
            out[(r, x)] = a0 * adj[(0, 0)] + a1 * adj[(1, 0)];
            out[(r, x | bit)] = a0 * adj[(0, 1)] + a1 * adj[(1, 1)];
        }
    }
    out
}
