//! Free fermions: the Fock module, quadratic fields with derivatives, the
//! conformal algebra they span, and the comparison with matrix products.

mod checks;
mod fock;
mod hat;
mod quadratic;

pub use checks::{
    check_action_identities, check_component_paths, check_hat_axioms, check_unit_ideal, oracle_compare,
    oracle_compare_with, oracle_suite, test_states,
};
pub use fock::{apply_mode, Basis, Factor, FockElement, Mode, Polarity};
pub use hat::{partial_hat, yplus_hat, yplus_hat_gen, yplus_state, HatAlgebra, HatElement};
pub use quadratic::{component_closed_form, component_series, quadratic_component, QuadGen};

use crate::matrix::MatrixError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FermionError {
    #[error("index {index} outside 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("closed form and series extraction disagree: {0}")]
    PathDisagreement(String),
    #[error("result leaves the quadratic span: {0}")]
    Straightening(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}
