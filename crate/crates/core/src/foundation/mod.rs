//! Exact rational arithmetic, generalized binomials, formal-series residue
//! calculus and exact linear solving.

mod binom;
mod linalg;
mod rational;
mod series;

pub use binom::{binom, binom_int, factorial};
pub use linalg::{axpy, solve_in_span, Echelon, SpanSolution, SparseVec};
pub(crate) use rational::write_term;
pub use rational::{format_rational, parse_rational, rat, ratio, Rational, Vector};
pub use series::{BiSeries, SeriesTerm, ZSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FoundationError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot parse rational {0:?}")]
    RationalParse(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}
