//! Exact algebra of Pauli-string operators with coefficients polynomial in
//! formal couplings `J1..J_{N-1}`.
//!
//! Operators are built from σ-letters (`σx`, `σy`, `σz`); the spin-½ operators
//! of the chain are `σ/2` and their factors of ½ are carried exactly in the
//! coefficients. No floating point enters the exact path; numeric values for
//! the couplings are substituted only by [`PauliOperator::substitute`] and the
//! matrix bridge.

mod coeff;
mod expand;
mod operator;
mod text;

pub use coeff::{Coefficient, GaussianRational, Monomial, Scalar};
pub use expand::{
    hamiltonian_symbolic, nested_adjoint, support_profile, taylor_evolve, to_matrix,
    DEFAULT_TERM_BUDGET,
};
pub use operator::{NumericOperator, PauliLetter, PauliOperator, PauliString, MAX_SITES};
pub use text::parse_gaussian;
