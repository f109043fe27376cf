//! Conformal algebras presented by a structure map on generators, and the
//! routines that check their axioms.

pub mod affine;
mod algebra;
pub mod axioms;
pub mod delta;
mod element;
mod table;

use thiserror::Error;

pub use affine::{affinize, affinize_checked, check_mode_table, BracketEntry, ModeBracketTable, ModeElement};
pub use algebra::{component_of, locality_of, ConformalAlgebra};
pub use axioms::{
    check_jacobi, check_on_generators, check_skew, check_translation, check_weight_grading, evaluate_jacobi,
    jacobi_suite, skew_components, skew_literal, skew_suite,
};
pub use delta::{check_delta_identity, sl_basis, DeltaCase};
pub use element::ConformalElement;
pub use table::{
    abelian_current, extend_product, from_lie_algebra, from_lie_algebra_unchecked, make_witt, sl2_current, sl2_mutant,
    sl2_table, witt_mutant, AlgebraDescription, BasisEntry, ComponentEntry, GeneratedAlgebra, LieTable, StructureMap,
    TableAlgebra, TableMap, TermEntry,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("not a Lie algebra at {triple:?}: {reason}")]
    NotLie { triple: Vec<String>, reason: String },
    #[error("unknown basis element {0}")]
    UnknownBasis(String),
    #[error("malformed algebra description: {0}")]
    Malformed(String),
    #[error("mode {mode} leaves the window |j| <= {window}; widen the window")]
    WidenWindow { mode: i64, window: i64 },
    #[error("affinization violates {0}")]
    AffinizationViolation(String),
    #[error("invalid case: {0}")]
    InvalidCase(String),
}
