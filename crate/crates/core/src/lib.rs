//! Exact-arithmetic laboratory for extension complexity of polytopes.
//!
//! The crate builds the combinatorial objects that appear in lower-bound
//! arguments for extended formulations and checks the identities between
//! them exactly:
//!
//! * [`exactmath`]: rationals, dense rational matrices, an exact simplex with
//!   Farkas certificates and an exact `LDLᵀ` PSD certificate.
//! * [`polytope`]: V/H-representations, double description, slack matrices,
//!   faces, linear images and the cut/correlation/stable-set families.
//! * [`bounds`]: maximal rectangles, minimum rectangle covers and
//!   nonnegative-rank sandwiches.
//! * [`factorization`]: nonnegative and PSD factorizations and the
//!   constructions that turn them into (conic) extensions and back.
//! * [`gadgets`]: the matrix `M(n)`, the stable-set gadget `H_n` and the
//!   3SAT/Hamiltonian-cycle gadget used for the TSP reduction.
//! * [`quantum`]: one-way quantum protocols that compute a matrix in
//!   expectation (floating point).
//! * [`cli`]: experiment configuration and report generation behind the
//!   `xclab` binary.

pub mod bounds;
pub mod budget;
pub mod cli;
pub mod error;
pub mod exactmath;
pub mod factorization;
pub mod gadgets;
pub mod polytope;
pub mod quantum;

pub use budget::Budget;
pub use error::{Error, Result};
pub use exactmath::{BooleanMatrix, Rational, RationalMatrix};
