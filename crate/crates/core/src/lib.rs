//! Exact computation of return-time sets `{k : φ^k(P) ∈ b + H}` for an
//! endomorphism `φ` of a finitely generated abelian group.
//!
//! The answer is an [`APSet`]: a finite union of arithmetic progressions and
//! single points, flagged either complete or verified up to a search bound.

pub mod apset;
pub mod arith;
pub mod dml;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod polyalg;
pub mod recurrence;
pub mod sml;
pub mod toric;

pub use apset::{APSet, ArithmeticProgression, Completeness};
pub use dml::{
    brute_force_oracle, orbit_coset_intersection, Coset, DynamicalProblem, Endomorphism, Pipeline,
};
pub use error::{Error, Result};
pub use lattice::{FgAbGroup, GroupElement, Subgroup};
pub use polyalg::{IntPolynomial, SplitModulus};
pub use recurrence::{ModularStateOrbit, Recurrence};
pub use sml::{SmlOptions, SmlSolver};
