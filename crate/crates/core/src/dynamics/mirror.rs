use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::chain::ChainSpec;
use crate::codes::{logical_operators, LogicalFrame};
use crate::dynamics::Propagator;
use crate::linalg::{embed, frobenius_distance, spin, CMatrix};
use crate::Result;

/// Chain length parity, which selects the form of the pair relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Self::Even
        } else {
            Self::Odd
        }
    }
}

/// One checked identity `O(t*) = O_expected`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MirrorCheck {
    pub relation: String,
    /// `‖O(t*) − O_expected‖_F`.
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MirrorReport {
    pub n: usize,
    pub parity: Parity,
    pub transfer_time: f64,
    pub tolerance: f64,
    pub checks: Vec<MirrorCheck>,
    pub all_pass: bool,
    pub max_residual: f64,
}

/// Checks the state-mirroring identities at `t*` in the Heisenberg picture.
///
/// * `Z_i(t*) = Z_{N+1-i}` for every site.
/// * Pair relations on `(i, N+1-i)` for every `i` off the middle site: for
///   even `N`, `X_i X_m → X_i X_m` and `X_i Y_m → Y_i X_m`; for odd `N`,
///   `X_i X_m → Y_i Y_m` and `X_i Y_m → −X_i Y_m`.
/// * The sender code operators `P, Lx, Ly, Lz` on sites `(1, 2)` evolve to the
///   receiver frame on `(N−1, N)`.
///
/// The pair relations assume `B = 0`; a field rotates them by a phase that
/// shows up as a residual. Failing identities are reported, not raised.
pub fn verify_mirror_relations(spec: &ChainSpec, tol: f64) -> Result<MirrorReport> {
    let prop = Propagator::new(spec, crate::chain::DEFAULT_DENSE_MAX_SITES)?;
    verify_with(&prop, tol)
}

pub(crate) fn verify_with(prop: &Propagator, tol: f64) -> Result<MirrorReport> {
    let spec = prop.spec();
    let n = spec.n;
    let t = spec.transfer_time();
    let parity = Parity::of(n);
    let [x, y, z] = spin();
    let one = |op: &CMatrix, s: usize| embed(op, &[s], n);
    let two = |a: &CMatrix, b: &CMatrix, s: usize, r: usize| {
        embed(&crate::linalg::kron(a, b), &[s, r], n)
    };

    let mut cases: Vec<(String, CMatrix, CMatrix)> = Vec::new();
    for i in 1..=n {
        let m = n + 1 - i;
        cases.push((format!("Z{i} -> Z{m}"), one(&z, i), one(&z, m)));
    }
    for i in 1..=n / 2 {
        let m = n + 1 - i;
        match parity {
            Parity::Even => {
                cases.push((
                    format!("X{i} X{m} -> X{i} X{m}"),
                    two(&x, &x, i, m),
                    two(&x, &x, i, m),
                ));
                cases.push((
                    format!("X{i} Y{m} -> Y{i} X{m}"),
                    two(&x, &y, i, m),
                    two(&y, &x, i, m),
                ));
            }
            Parity::Odd => {
                cases.push((
                    format!("X{i} X{m} -> Y{i} Y{m}"),
                    two(&x, &x, i, m),
                    two(&y, &y, i, m),
                ));
                cases.push((
                    format!("X{i} Y{m} -> -X{i} Y{m}"),
                    two(&x, &y, i, m),
                    -two(&x, &y, i, m),
                ));
            }
        }
    }
    let sender = LogicalFrame::sender(n);
    let receiver = LogicalFrame::receiver(n);
    let from = logical_operators(&sender).embedded(&sender);
    let to = logical_operators(&receiver).embedded(&receiver);
    for ((name, a), b) in ["P", "Lx", "Ly", "Lz"].iter().zip(from).zip(to) {
        cases.push((format!("{name} sender -> receiver"), a, b));
    }

    let mut checks = Vec::with_capacity(cases.len());
    for (relation, op, expected) in cases {
        let residual = frobenius_distance(&prop.heisenberg_at(&op, t)?, &expected);
        checks.push(MirrorCheck {
            relation,
            residual,
            pass: residual <= tol,
        });
    }
    let max_residual = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(MirrorReport {
        n,
        parity,
        transfer_time: t,
        tolerance: tol,
        all_pass: checks.iter().all(|c| c.pass),
        max_residual,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engineered_chains_mirror() {
        for n in 2..=7 {
            let report =
                verify_mirror_relations(&ChainSpec::engineered(n, 1.0).unwrap(), 1e-9).unwrap();
            assert!(report.all_pass, "n = {n}: {:?}", report.checks);
            assert_eq!(report.checks.len(), n + 2 * (n / 2) + 4);
        }
    }

    #[test]
    fn uniform_chain_fails_and_reports() {
        let report = verify_mirror_relations(&ChainSpec::uniform(5, 1.0).unwrap(), 1e-9).unwrap();
        assert!(!report.all_pass);
        assert!(report.max_residual > 1e-3);
    }
}
