//! The matrix conformal algebra on `M_k ⊗ F[t1, t2]` and its subalgebra families.

mod canonical;
mod element;
mod family;
mod minimal;

use thiserror::Error;

pub use canonical::{
    canonicalize_over_v, check_matrix_grading, expand_from_v, matrix_over_v, v_index, v_unit, MatrixAlgebra,
    MatrixGeneratorMap,
};
pub use element::{
    component_by_weight, parse_element, yplus_matrix, yplus_matrix_with, Involution, MatElement, MatKey,
};
pub use family::{
    closure_check, family_basis, generation_check, ideal_probe, membership, skew_transport, Family, FamilyKind, Kind,
};
pub use minimal::{
    check_jordan, check_lie, circle_product, identify_model, Identification, MinimalWeightAlgebra, ModelLabel,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("matrix sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("the symplectic involution needs even k, got k = {0}")]
    OddDagger(usize),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("seed must be nonzero")]
    ZeroSeed,
    #[error("element {0} is not in the family")]
    NotInFamily(String),
    #[error("{0} is not in the minimal-weight space")]
    NotMinimalWeight(String),
    #[error("product {0} leaves the minimal-weight space")]
    NotClosed(String),
    #[error("no matrix model matches: {0}")]
    NoModel(String),
    #[error("cannot parse element: {0}")]
    Parse(String),
}
