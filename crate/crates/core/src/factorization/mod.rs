//! Nonnegative and PSD factorizations of slack matrices and the extensions
//! they correspond to.
//!
//! Only the nonnegative orthant and the PSD cone are supported; both are
//! self-dual, so one code path covers the conic statements.

mod extension;
mod nonneg;
mod psd;

use std::fmt;

pub use extension::{
    extend_to_redundant_rows, extension_from_nonneg_factorization, factorization_from_extension,
    flatten_sym, psd_extension_from_factorization, sym_pairing_row, unflatten_sym, ConeId,
    ExtensionSystem,
};
pub use nonneg::{verify_nonneg_factorization, NonnegFactorization};
pub use psd::{
    explicit_psd_factorization_m, psd_rank_upper_from_sqrt, verify_psd_factorization,
    PsdFactorization,
};

/// Outcome of an exact verification; a failure names the first offending
/// index in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { row: usize, col: usize, reason: String },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub(crate) fn fail(row: usize, col: usize, reason: impl Into<String>) -> Self {
        Verdict::Fail {
            row,
            col,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("pass"),
            Verdict::Fail { row, col, reason } => write!(f, "fail at ({row}, {col}): {reason}"),
        }
    }
}
