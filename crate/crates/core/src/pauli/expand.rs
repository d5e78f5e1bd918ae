//! Heisenberg-picture commutator expansion
//! `O(t) = O + (it/1!)[H,O] + ((it)²/2!)[H,[H,O]] + ...`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::coeff::{Coefficient, Scalar};
use super::operator::{NumericOperator, PauliLetter, PauliOperator, PauliString};
use crate::linalg::CMatrix;
use crate::{Error, Result};

/// Default cap on expanded terms held by a single adjoint iterate.
pub const DEFAULT_TERM_BUDGET: usize = 1_000_000;

/// `Σ_i J_i (X_i X_{i+1} + Y_i Y_{i+1})` with spin-½ operators, i.e.
/// coefficient `J_i/4` on each σ-letter string. The field term is omitted.
pub fn hamiltonian_symbolic(n: usize) -> Result<PauliOperator<Coefficient>> {
    if n < 2 {
        return Err(Error::ChainTooShort { n, min: 2 });
    }
    let mut h = PauliOperator::zero(n);
    for bond in 1..n {
        let coeff = Coefficient::coupling(bond).mul(&Coefficient::rational(1, 4));
        for letter in [PauliLetter::X, PauliLetter::Y] {
            h.add_term(
                PauliString::from_letters(&[(bond, letter), (bond + 1, letter)]),
                coeff.clone(),
            );
        }
    }
    Ok(h)
}

/// `[ad_h^0(o), ..., ad_h^depth(o)]` where `ad_h(x) = [h, x]`.
///
/// Fails with [`Error::TermBudget`] naming the first depth whose iterate
/// exceeds `budget` expanded terms.
pub fn nested_adjoint<C: Scalar>(
    h: &PauliOperator<C>,
    o: &PauliOperator<C>,
    depth: usize,
    budget: usize,
) -> Result<Vec<PauliOperator<C>>> {
    if h.site_count() != o.site_count() {
        return Err(Error::SiteCountMismatch {
            left: h.site_count(),
            right: o.site_count(),
        });
    }
    let mut out = Vec::with_capacity(depth + 1);
    out.push(o.clone());
    for k in 1..=depth {
        let next = h.commutator(&out[k - 1])?;
        let terms = next.weight();
        if terms > budget {
            return Err(Error::TermBudget {
                depth: k,
                terms,
                budget,
            });
        }
        out.push(next);
    }
    Ok(out)
}

/// Partial sum of the Taylor series through `order` with numeric couplings
/// substituted for the formal `J_k` before expanding.
///
/// This is a cross-check of the dense propagator, not a production
/// integrator.
pub fn taylor_evolve(
    h: &PauliOperator<Coefficient>,
    o: &PauliOperator<Coefficient>,
    t: f64,
    order: usize,
    couplings: &[f64],
    budget: usize,
) -> Result<NumericOperator> {
    let h = h.substitute(couplings)?;
    let o = o.substitute(couplings)?;
    let iterates = nested_adjoint(&h, &o, order, budget)?;
    let mut sum = NumericOperator::zero(o.site_count());
    let mut factor = Complex64::new(1.0, 0.0);
    for (k, term) in iterates.iter().enumerate() {
        if k > 0 {
            factor *= Complex64::new(0.0, t / k as f64);
        }
        sum = sum.try_add(&term.scale(&factor))?;
    }
    Ok(sum)
}

/// Union support of each operator.
pub fn support_profile<C: Scalar>(ops: &[PauliOperator<C>]) -> Vec<BTreeSet<usize>> {
    ops.iter().map(PauliOperator::support).collect()
}

/// Dense matrix of an exact operator with `couplings[k-1]` substituted for
/// `Jk`.
pub fn to_matrix(o: &PauliOperator<Coefficient>, couplings: &[f64]) -> Result<CMatrix> {
    Ok(o.substitute(couplings)?.to_matrix())
}

#[cfg(test)]
mod tests {
    use super::PauliLetter::*;
    use super::*;
    use crate::pauli::coeff::{GaussianRational, Monomial};

    type Op = PauliOperator<Coefficient>;

    fn code_x(n: usize) -> Op {
        &Op::letters(n, &[(1, X), (2, X)]) + &Op::letters(n, &[(1, Y), (2, Y)])
    }

    #[test]
    fn two_site_hamiltonian_has_two_quarter_terms() {
        let h = hamiltonian_symbolic(2).unwrap();
        assert_eq!(h.len(), 2);
        let quarter_j1 =
            Coefficient::from_monomial(Monomial::coupling(1, 1), GaussianRational::ratio(1, 4));
        for (_, c) in h.terms() {
            assert_eq!(c, &quarter_j1);
        }
        assert_eq!(hamiltonian_symbolic(3).unwrap().len(), 4);
        assert!(matches!(
            hamiltonian_symbolic(1),
            Err(Error::ChainTooShort { .. })
        ));
    }

    #[test]
    fn depth_zero_is_identity_map() {
        let h = hamiltonian_symbolic(3).unwrap();
        let o = code_x(3);
        assert_eq!(
            nested_adjoint(&h, &o, 0, DEFAULT_TERM_BUDGET).unwrap(),
            alloc::vec![o]
        );
    }

    #[test]
    fn budget_names_the_failing_depth() {
        let h = hamiltonian_symbolic(6).unwrap();
        let o = Op::letters(6, &[(1, X)]);
        let err = nested_adjoint(&h, &o, 6, 1).unwrap_err();
        assert!(
            matches!(
                err,
                Error::TermBudget {
                    depth: 2,
                    budget: 1,
                    ..
                }
            ),
            "{err:?}"
        );
    }

    #[test]
    fn code_x_commutes_with_two_site_hamiltonian() {
        let h = hamiltonian_symbolic(2).unwrap();
        let o = code_x(2);
        let evolved = taylor_evolve(&h, &o, 0.7, 8, &[1.3], DEFAULT_TERM_BUDGET).unwrap();
        assert_eq!(evolved, o.substitute(&[1.3]).unwrap());
    }

    #[test]
    fn order_zero_returns_operator() {
        let h = hamiltonian_symbolic(3).unwrap();
        let o = Op::letters(3, &[(1, X)]);
        let c = [1.0, 2.0];
        assert_eq!(
            taylor_evolve(&h, &o, 5.0, 0, &c, DEFAULT_TERM_BUDGET).unwrap(),
            o.substitute(&c).unwrap()
        );
    }

    #[test]
    fn single_site_support() {
        let profile = support_profile(&[Op::letters(3, &[(1, X)])]);
        assert_eq!(profile, alloc::vec![BTreeSet::from([1])]);
    }
}
