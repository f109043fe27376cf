//! Exact verification kernel for conformal algebras.
//!
//! * [`foundation`]: rationals, generalized binomials, formal series, exact span solving.
//! * [`kernel`]: conformal algebras given by structure maps, axiom checkers,
//!   affinization and the formal delta-distribution identities.
//! * [`matrix`]: the matrix conformal algebra on `M_k ⊗ F[t1, t2]`, its subalgebra
//!   families and their minimal-weight Jordan and Lie algebras.
//! * [`fermion`]: the fermionic Fock module, quadratic fields and the
//!   comparison of their products with the matrix structure map.

pub mod exec;
pub mod fermion;
pub mod foundation;
pub mod kernel;
pub mod matrix;
pub mod report;
pub mod sampler;

pub use foundation::{Rational, Vector, ZSeries};
pub use report::{Failure, Status, VerificationReport};
