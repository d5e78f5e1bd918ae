//! Two-qubit logical code on a site pair: the logical qubit lives in
//! `span{|01⟩, |10⟩}` with `|10⟩` (first spin up) as logical `|0⟩`.
//!
//! Logical operators are kept in σ-units:
//!
//! | operator | sender, sites (1, 2)      | receiver, sites (N-1, N)  |
//! |----------|---------------------------|---------------------------|
//! | `P`      | `(1 - σz σz) / 2`         | same                      |
//! | `Lx`     | `(σx σx + σy σy) / 2`     | same                      |
//! | `Ly`     | `(σy σx - σx σy) / 2`     | `(σx σy - σy σx) / 2`     |
//! | `Lz`     | `(σz 1 - 1 σz) / 2`       | `(1 σz - σz 1) / 2`       |
//!
//! The receiver column is the site mirror of the sender column, which is what
//! free evolution to `t*` produces. Each frame satisfies `Lk² = P` and
//! `[Lx, Ly] = 2i Lz` cyclically.

use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
// Only used when std is absent from the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{embed, expectation, kron, sigma, CMatrix, I, ZERO};
use crate::{Error, Result};

/// Default leakage tolerance of [`decode`].
pub const DEFAULT_LEAKAGE_TOL: f64 = 1e-6;
const BALL_TOL: f64 = 1e-12;
const PURITY_SNAP: f64 = 1e-14;

/// Bloch coordinates of a qubit state.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(from = "[f64; 3]", into = "[f64; 3]"))]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 3]> for BlochVector {
    fn from([x, y, z]: [f64; 3]) -> Self {
        Self { x, y, z }
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(r: BlochVector) -> Self {
        [r.x, r.y, r.z]
    }
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        self.into()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn is_physical(&self) -> bool {
        self.norm() <= 1.0 + BALL_TOL
    }

    /// `±x, ±y, ±z`.
    pub fn cardinal() -> [Self; 6] {
        [
            Self::new(1.0, 0.0, 0.0),
            Self::new(-1.0, 0.0, 0.0),
            Self::new(0.0, 1.0, 0.0),
            Self::new(0.0, -1.0, 0.0),
            Self::new(0.0, 0.0, 1.0),
            Self::new(0.0, 0.0, -1.0),
        ]
    }

    fn check(&self) -> Result<()> {
        if self.is_physical() && self.norm().is_finite() {
            Ok(())
        } else {
            Err(Error::BlochOutOfBall { norm: self.norm() })
        }
    }
}

/// Which end of the chain a frame sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum FrameRole {
    Sender,
    Receiver,
}

impl fmt::Display for FrameRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Sender => "sender",
            Self::Receiver => "receiver",
        })
    }
}

impl FromStr for FrameRole {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sender" => Ok(Self::Sender),
            "receiver" => Ok(Self::Receiver),
            other => Err(Error::InvalidParameter(alloc::format!(
                "unknown frame `{other}`"
            ))),
        }
    }
}

/// Code frame on a chain of `n` sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LogicalFrame {
    pub role: FrameRole,
    pub n: usize,
}

impl LogicalFrame {
    pub fn sender(n: usize) -> Self {
        Self {
            role: FrameRole::Sender,
            n,
        }
    }

    pub fn receiver(n: usize) -> Self {
        Self {
            role: FrameRole::Receiver,
            n,
        }
    }

    /// Physical sites in ascending order.
    pub fn sites(&self) -> [usize; 2] {
        match self.role {
            FrameRole::Sender => [1, 2],
            FrameRole::Receiver => [self.n - 1, self.n],
        }
    }
}

/// Code projector and logical Pauli operators as `4 × 4` matrices on the
/// frame's two sites (ascending order).
#[derive(Clone, Debug, PartialEq)]
pub struct LogicalOperators {
    pub p: CMatrix,
    pub lx: CMatrix,
    pub ly: CMatrix,
    pub lz: CMatrix,
}

impl LogicalOperators {
    pub fn logical(&self) -> [&CMatrix; 3] {
        [&self.lx, &self.ly, &self.lz]
    }

    /// `[P, Lx, Ly, Lz]` embedded in the `n`-site register of `frame`.
    pub fn embedded(&self, frame: &LogicalFrame) -> [CMatrix; 4] {
        let sites = frame.sites();
        [&self.p, &self.lx, &self.ly, &self.lz].map(|m| embed(m, &sites, frame.n))
    }
}

pub fn logical_operators(frame: &LogicalFrame) -> LogicalOperators {
    let [sx, sy, sz] = sigma();
    let id = CMatrix::identity(2, 2);
    let half = |m: CMatrix| m.scale(0.5);
    let p = half(CMatrix::identity(4, 4) - kron(&sz, &sz));
    let lx = half(kron(&sx, &sx) + kron(&sy, &sy));
    let yx_minus_xy = half(kron(&sy, &sx) - kron(&sx, &sy));
    let z_minus_z = half(kron(&sz, &id) - kron(&id, &sz));
    let (ly, lz) = match frame.role {
        FrameRole::Sender => (yx_minus_xy, z_minus_z),
        FrameRole::Receiver => (-yx_minus_xy, -z_minus_z),
    };
    LogicalOperators { p, lx, ly, lz }
}

/// `ρ = (P + r·L) / 2` in the sender frame.
pub fn encode(r: &BlochVector) -> Result<CMatrix> {
    r.check()?;
    let ops = logical_operators(&LogicalFrame::sender(2));
    Ok((ops.p + ops.lx.scale(r.x) + ops.ly.scale(r.y) + ops.lz.scale(r.z)).scale(0.5))
}

/// `r_k = Tr[ρ Lk]` together with the leakage `1 - Tr[ρ P]`.
///
/// Leaked weight decodes as the maximally mixed logical state, so the result
/// is always a physical Bloch vector.
pub fn decode_with_leakage(rho2: &CMatrix, frame: &LogicalFrame) -> Result<(BlochVector, f64)> {
    if rho2.shape() != (4, 4) {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho2.nrows(),
        });
    }
    let ops = logical_operators(frame);
    let [x, y, z] = ops.logical().map(|l| expectation(rho2, l));
    let leakage = 1.0 - expectation(rho2, &ops.p);
    Ok((BlochVector::new(x, y, z), leakage))
}

/// Decode a two-site state, failing when `Tr[ρ P] ≤ 1 - tol`.
pub fn decode(rho2: &CMatrix, frame: &LogicalFrame, tol: f64) -> Result<BlochVector> {
    let (r, leakage) = decode_with_leakage(rho2, frame)?;
    if leakage >= tol {
        return Err(Error::Leakage { leakage });
    }
    Ok(r)
}

/// `F = ½ (1 + a·b + √((1 - |a|²)(1 - |b|²)))`, clamped to `[0, 1]`.
///
/// Mixedness `1 - |r|²` below `1e-14` counts as zero, so rounding in the
/// norm of a pure state does not leak through the square root.
pub fn qubit_fidelity(a: &BlochVector, b: &BlochVector) -> f64 {
    let mixedness = |r: &BlochVector| {
        let m = 1.0 - r.dot(r);
        if m < PURITY_SNAP {
            0.0
        } else {
            m
        }
    };
    let mixed = (mixedness(a) * mixedness(b)).sqrt();
    (0.5 * (1.0 + a.dot(b) + mixed)).clamp(0.0, 1.0)
}

/// `(1 + r·σ) / 2`.
pub fn single_qubit_density(r: &BlochVector) -> Result<CMatrix> {
    r.check()?;
    let [sx, sy, sz] = sigma();
    Ok((CMatrix::identity(2, 2) + sx.scale(r.x) + sy.scale(r.y) + sz.scale(r.z)).scale(0.5))
}

/// `r_k = Tr[ρ σk]`.
pub fn single_qubit_bloch(rho: &CMatrix) -> BlochVector {
    let [x, y, z] = sigma().map(|s| expectation(rho, &s));
    BlochVector::new(x, y, z)
}

/// `exp(-i θ σz / 2)`: rotates Bloch vectors by `θ` about z.
pub fn rotation_z(theta: f64) -> CMatrix {
    let half = Complex64::from_polar(1.0, -theta / 2.0);
    CMatrix::from_row_slice(2, 2, &[half, ZERO, ZERO, half.conj()])
}

/// Unitary `U` with `U (v·σ) U† = (R v)·σ` for a proper rotation `R`
/// (row-major), fixed up to a global sign.
pub fn su2_from_rotation(r: &[[f64; 3]; 3]) -> CMatrix {
    // quaternion (w, x, y, z) with the largest component extracted first
    let tr = r[0][0] + r[1][1] + r[2][2];
    let (w, x, y, z) = if tr > 0.0 {
        let s = 2.0 * (1.0 + tr).sqrt();
        (
            0.25 * s,
            (r[2][1] - r[1][2]) / s,
            (r[0][2] - r[2][0]) / s,
            (r[1][0] - r[0][1]) / s,
        )
    } else if r[0][0] > r[1][1] && r[0][0] > r[2][2] {
        let s = 2.0 * (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt();
        (
            (r[2][1] - r[1][2]) / s,
            0.25 * s,
            (r[0][1] + r[1][0]) / s,
            (r[0][2] + r[2][0]) / s,
        )
    } else if r[1][1] > r[2][2] {
        let s = 2.0 * (1.0 + r[1][1] - r[0][0] - r[2][2]).sqrt();
        (
            (r[0][2] - r[2][0]) / s,
            (r[0][1] + r[1][0]) / s,
            0.25 * s,
            (r[1][2] + r[2][1]) / s,
        )
    } else {
        let s = 2.0 * (1.0 + r[2][2] - r[0][0] - r[1][1]).sqrt();
        (
            (r[1][0] - r[0][1]) / s,
            (r[0][2] + r[2][0]) / s,
            (r[1][2] + r[2][1]) / s,
            0.25 * s,
        )
    };
    let [sx, sy, sz] = sigma();
    CMatrix::identity(2, 2).scale(w) - (sx.scale(x) + sy.scale(y) + sz.scale(z)) * I
}

/// Bloch rotation `R_ij = ½ Tr[σi U σj U†]` of a single-qubit unitary.
pub fn rotation_of(u: &CMatrix) -> [[f64; 3]; 3] {
    let s = sigma();
    let mut r = [[0.0; 3]; 3];
    for (i, row) in r.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let m = &s[i] * u * &s[j] * u.adjoint();
            *entry = 0.5 * crate::linalg::trace(&m).re;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, frobenius_distance, ONE};
    use alloc::string::ToString;

    #[test]
    fn frame_algebra() {
        for frame in [LogicalFrame::sender(4), LogicalFrame::receiver(4)] {
            let ops = logical_operators(&frame);
            let [lx, ly, lz] = ops.logical();
            let two_i = Complex64::new(0.0, 2.0);
            assert!(frobenius_distance(&commutator(lx, ly), &(lz * two_i)) < 1e-14);
            assert!(frobenius_distance(&commutator(ly, lz), &(lx * two_i)) < 1e-14);
            assert!(frobenius_distance(&commutator(lz, lx), &(ly * two_i)) < 1e-14);
            for l in [lx, ly, lz] {
                assert!(frobenius_distance(&(l * l), &ops.p) < 1e-14);
                assert!(frobenius_distance(&(l * &ops.p), l) < 1e-14);
            }
            assert!(frobenius_distance(&(&ops.p * &ops.p), &ops.p) < 1e-14);
        }
    }

    #[test]
    fn logical_z_is_plus_one_on_01() {
        let ops = logical_operators(&LogicalFrame::sender(2));
        assert_eq!(ops.lz[(1, 1)].re, 1.0);
        assert_eq!(ops.lz[(2, 2)].re, -1.0);
        assert_eq!(ops.lz[(0, 0)].re, 0.0);
        assert_eq!(ops.lz[(3, 3)].re, 0.0);
    }

    #[test]
    fn poles_encode_to_basis_states() {
        let zero = encode(&BlochVector::new(0.0, 0.0, -1.0)).unwrap();
        let one = encode(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        for (rho, index) in [(zero, 2), (one, 1)] {
            let mut expected = CMatrix::zeros(4, 4);
            expected[(index, index)] = ONE;
            assert!(frobenius_distance(&rho, &expected) < 1e-15);
        }
    }

    #[test]
    fn leakage_is_reported() {
        let mixed = CMatrix::identity(4, 4).scale(0.25);
        match decode(&mixed, &LogicalFrame::sender(2), DEFAULT_LEAKAGE_TOL) {
            Err(Error::Leakage { leakage }) => assert!((leakage - 0.5).abs() < 1e-15),
            other => panic!("expected leakage error, got {other:?}"),
        }
    }

    #[test]
    fn encode_rejects_points_outside_ball() {
        assert!(matches!(
            encode(&BlochVector::new(1.0, 1.0, 0.0)),
            Err(Error::BlochOutOfBall { .. })
        ));
    }

    #[test]
    fn fidelity_examples() {
        let up = BlochVector::new(0.0, 0.0, 1.0);
        let down = BlochVector::new(0.0, 0.0, -1.0);
        assert_eq!(qubit_fidelity(&up, &up), 1.0);
        assert_eq!(qubit_fidelity(&up, &down), 0.0);
        assert_eq!(qubit_fidelity(&up, &BlochVector::default()), 0.5);
    }

    #[test]
    fn frame_roles_parse() {
        assert_eq!(
            "receiver".parse::<FrameRole>().unwrap(),
            FrameRole::Receiver
        );
        assert_eq!(FrameRole::Sender.to_string(), "sender");
        assert!("middle".parse::<FrameRole>().is_err());
    }

    #[test]
    fn su2_round_trip() {
        let s = sigma();
        let (theta, axis) = (2.3f64, [0.48, -0.6, 0.64]);
        let n_sigma = &s[0].scale(axis[0]) + &s[1].scale(axis[1]) + &s[2].scale(axis[2]);
        let u = CMatrix::identity(2, 2).scale((theta / 2.0).cos())
            - n_sigma * (I * (theta / 2.0).sin());
        let r = rotation_of(&u);
        let back = su2_from_rotation(&r);
        assert!(
            frobenius_distance(&rotation_of(&back).map_to_matrix(), &r.map_to_matrix()) < 1e-12
        );
        let rz = rotation_of(&rotation_z(core::f64::consts::FRAC_PI_2));
        assert!((rz[1][0] - 1.0).abs() < 1e-15 && (rz[0][1] + 1.0).abs() < 1e-15);
    }

    trait ToMatrix {
        fn map_to_matrix(&self) -> CMatrix;
    }

    impl ToMatrix for [[f64; 3]; 3] {
        fn map_to_matrix(&self) -> CMatrix {
            CMatrix::from_fn(3, 3, |r, c| Complex64::new(self[r][c], 0.0))
        }
    }
}
