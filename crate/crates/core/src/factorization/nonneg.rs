use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::Verdict;
use crate::error::{Error, Result};
use crate::exactmath::{dot, RationalMatrix};

/// `S = T U` with `T` (`m × r`) and `U` (`r × n`) entrywise nonnegative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonnegFactorization {
    #[serde(rename = "T")]
    pub t: RationalMatrix,
    #[serde(rename = "U")]
    pub u: RationalMatrix,
}

impl NonnegFactorization {
    pub fn new(t: RationalMatrix, u: RationalMatrix) -> Result<Self> {
        if t.cols() != u.rows() {
            return Err(Error::dim(format!(
                "inner dimensions differ: T has {} columns, U has {} rows",
                t.cols(),
                u.rows()
            )));
        }
        if t.cols() == 0 {
            return Err(Error::input("inner dimension must be at least 1"));
        }
        if !t.is_nonnegative() || !u.is_nonnegative() {
            return Err(Error::input("factors must be entrywise nonnegative"));
        }
        Ok(Self { t, u })
    }

    /// `S = I · S` (or `S · I` when that is smaller).
    pub fn trivial(s: &RationalMatrix) -> Result<Self> {
        if s.rows() <= s.cols() {
            Self::new(RationalMatrix::identity(s.rows()), s.clone())
        } else {
            Self::new(s.clone(), RationalMatrix::identity(s.cols()))
        }
    }

    pub fn inner_dim(&self) -> usize {
        self.t.cols()
    }

    pub fn product(&self) -> RationalMatrix {
        self.t.mul(&self.u).expect("shapes checked at construction")
    }
}

/// Exact check of `S = T U` and nonnegativity of both factors. Shape
/// mismatches are errors; numerical disagreements are reported in the
/// verdict.
pub fn verify_nonneg_factorization(s: &RationalMatrix, f: &NonnegFactorization) -> Result<Verdict> {
    let (t, u) = (&f.t, &f.u);
    if t.rows() != s.rows() || u.cols() != s.cols() || t.cols() != u.rows() {
        return Err(Error::dim("factor shapes do not match the matrix"));
    }
    for i in 0..t.rows() {
        for k in 0..t.cols() {
            if t[(i, k)].is_negative() {
                return Ok(Verdict::fail(i, k, "negative entry in T"));
            }
        }
    }
    for k in 0..u.rows() {
        for j in 0..u.cols() {
            if u[(k, j)].is_negative() {
                return Ok(Verdict::fail(k, j, "negative entry in U"));
            }
        }
    }
    let ut = u.transpose();
    for i in 0..s.rows() {
        for j in 0..s.cols() {
            if dot(t.row(i), ut.row(j)) != s[(i, j)] {
                return Ok(Verdict::fail(i, j, "product differs from the matrix"));
            }
        }
    }
    Ok(Verdict::Pass)
}
