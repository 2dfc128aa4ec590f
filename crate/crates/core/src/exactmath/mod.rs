//! Exact rational linear algebra.
//!
//! Everything here is arbitrary precision; nothing in this module touches
//! floating point except the explicit conversion helpers.

mod farkas;
mod ldl;
mod lp;
mod matrix;
mod rational;

pub use farkas::{farkas_decompose, farkas_decompose_with_equalities, is_valid_inequality};
pub use ldl::{ldl_psd, Ldl};
pub use lp::{lp_solve, LpResult, LpStatus, Sense};
pub use matrix::{dot, BooleanMatrix, RationalMatrix};
pub use rational::{
    format_rational, from_f64_bounded, parse_rational, rat, to_f64, vec_to_f64, Rational,
};

/// Exact rank; see [`RationalMatrix::rank`].
pub fn rat_rank(m: &RationalMatrix) -> usize {
    m.rank()
}

/// Binary support matrix: bit set exactly where the entry is nonzero.
pub fn support(m: &RationalMatrix) -> BooleanMatrix {
    m.support()
}
