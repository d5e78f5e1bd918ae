// Only used when std is absent from the build graph.
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::state::QuantumState;
use crate::linalg::{
    apply_site_vector, conjugate_site, hermitian_eigen, hermiticity_defect, CMatrix,
};
use crate::{Error, Result};

const SPECTRUM_TOL: f64 = 1e-12;
/// Branches below this probability cannot be conditioned on.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-14;

/// How the outcome of a measurement is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Outcome {
    /// Condition on the given eigenvalue (`+0.5` or `-0.5`).
    Forced(f64),
    /// Sample with a generator seeded from this value.
    Sampled(u64),
}

#[derive(Clone, Debug)]
pub struct MeasurementResult {
    pub outcome: f64,
    pub probability: f64,
    pub post_state: QuantumState,
}

/// Eigen-projectors of a single-site spin component, as `(eigenvalue,
/// projector)` with `-½` first.
fn spin_projectors(observable: &CMatrix) -> Result<[(f64, CMatrix); 2]> {
    if observable.shape() != (2, 2) || hermiticity_defect(observable) > SPECTRUM_TOL {
        return Err(Error::NotSpinComponent);
    }
    let (values, vectors) = hermitian_eigen(observable);
    if (values[0] + 0.5).abs() > SPECTRUM_TOL || (values[1] - 0.5).abs() > SPECTRUM_TOL {
        return Err(Error::NotSpinComponent);
    }
    let proj = |k: usize| {
        let v = vectors.column(k);
        v * v.adjoint()
    };
    Ok([(-0.5, proj(0)), (0.5, proj(1))])
}

fn check_site(state: &QuantumState, site: usize) -> Result<()> {
    let n = state.site_count();
    if site == 0 || site > n {
        Err(Error::SiteOutOfRange { site, n })
    } else {
        Ok(())
    }
}

fn project(state: &QuantumState, proj: &CMatrix, site: usize) -> (f64, QuantumState) {
    let n = state.site_count();
    match state {
        QuantumState::Pure { psi, .. } => {
            let out = apply_site_vector(proj, site, n, psi);
            let p = out.norm_squared();
            (p, QuantumState::pure_unchecked(n, out))
        }
        QuantumState::Mixed { rho, .. } => {
            let out = conjugate_site(proj, site, n, rho);
            let p = crate::linalg::trace(&out).re;
            (p, QuantumState::mixed_unchecked(n, out))
        }
    }
}

/// Probabilities of the `-½` and `+½` outcomes.
pub fn outcome_probabilities(
    state: &QuantumState,
    observable: &CMatrix,
    site: usize,
) -> Result<[(f64, f64); 2]> {
    check_site(state, site)?;
    let projectors = spin_projectors(observable)?;
    Ok(projectors.map(|(value, proj)| (value, project(state, &proj, site).0)))
}

/// Projective measurement of a spin component on one site, renormalizing
/// the post-measurement state.
pub fn measure(
    state: &QuantumState,
    observable: &CMatrix,
    site: usize,
    outcome: Outcome,
) -> Result<MeasurementResult> {
    check_site(state, site)?;
    let [(lo, p_lo), (hi, p_hi)] = spin_projectors(observable)?;
    let (value, proj) = match outcome {
        Outcome::Forced(v) if (v - hi).abs() < SPECTRUM_TOL => (hi, p_hi),
        Outcome::Forced(v) if (v - lo).abs() < SPECTRUM_TOL => (lo, p_lo),
        Outcome::Forced(v) => {
            return Err(Error::InvalidParameter(alloc::format!(
                "outcome {v} is not an eigenvalue of a spin component"
            )))
        }
        Outcome::Sampled(seed) => {
            let (p_up, _) = project(state, &p_hi, site);
            let draw: f64 = ChaCha8Rng::seed_from_u64(seed).random();
            if draw < p_up / state.trace() {
                (hi, p_hi)
            } else {
                (lo, p_lo)
            }
        }
    };
    let (p, post) = project(state, &proj, site);
    let probability = p / state.trace();
    if probability < MIN_BRANCH_PROBABILITY {
        return Err(Error::ZeroProbabilityOutcome { outcome: value });
    }
    let post_state = match post {
        QuantumState::Pure { n, psi } => QuantumState::pure_unchecked(n, psi.scale(1.0 / p.sqrt())),
        QuantumState::Mixed { n, rho } => QuantumState::mixed_unchecked(n, rho.scale(1.0 / p)),
    };
    Ok(MeasurementResult {
        outcome: value,
        probability,
        post_state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spin;

    #[test]
    fn z_on_zero_is_certain() {
        let [_, _, z] = spin();
        let r = measure(&QuantumState::basis(1, 0), &z, 1, Outcome::Sampled(3)).unwrap();
        assert_eq!(r.outcome, 0.5);
        assert!((r.probability - 1.0).abs() < 1e-15);
        assert!(matches!(
            measure(&QuantumState::basis(1, 0), &z, 1, Outcome::Forced(-0.5)),
            Err(Error::ZeroProbabilityOutcome { .. })
        ));
    }

    #[test]
    fn x_on_zero_is_even() {
        let [x, _, _] = spin();
        let probs = outcome_probabilities(&QuantumState::basis(2, 0), &x, 2).unwrap();
        for (_, p) in probs {
            assert!((p - 0.5).abs() < 1e-15);
        }
        let r = measure(&QuantumState::basis(2, 0), &x, 2, Outcome::Forced(-0.5)).unwrap();
        assert!((r.post_state.trace() - 1.0).abs() < 1e-14);
        assert!(
            (r.post_state
                .expectation(&crate::linalg::embed(&x, &[2], 2))
                .unwrap()
                + 0.5)
                .abs()
                < 1e-14
        );
    }

    #[test]
    fn rejects_bad_observables_and_sites() {
        let [x, _, _] = spin();
        let s = QuantumState::basis(2, 0);
        assert_eq!(
            measure(&s, &x, 3, Outcome::Sampled(0)).unwrap_err(),
            Error::SiteOutOfRange { site: 3, n: 2 }
        );
        let sigma_x = x.scale(2.0);
        assert_eq!(
            measure(&s, &sigma_x, 1, Outcome::Sampled(0)).unwrap_err(),
            Error::NotSpinComponent
        );
    }
}
