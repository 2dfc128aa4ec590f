use num_traits::{One, Zero};

use super::BitString;
use crate::error::{Error, Result};
use crate::exactmath::{rat, Rational, RationalMatrix};
use crate::polytope::cor_coordinates;

/// Largest `n` accepted by [`matrix_m`] (a `4096 x 4096` matrix).
pub const MAX_M_SIZE: usize = 12;

/// `M(n)_ab = (1 - aᵀb)²`, rows and columns in lexicographic order.
pub fn matrix_m(n: usize) -> Result<RationalMatrix> {
    let nm = matrix_n(n)?;
    Ok(RationalMatrix::from_fn(nm.rows(), nm.cols(), |i, j| {
        &nm[(i, j)] * &nm[(i, j)]
    }))
}

/// `N(n)_ab = 1 - aᵀb`, the entrywise square root of `M(n)`.
pub fn matrix_n(n: usize) -> Result<RationalMatrix> {
    if !(1..=MAX_M_SIZE).contains(&n) {
        return Err(Error::input(format!("M(n) requires 1 <= n <= {MAX_M_SIZE}")));
    }
    let strings: Vec<BitString> = BitString::all(n).collect();
    Ok(RationalMatrix::from_fn(strings.len(), strings.len(), |i, j| {
        rat(1 - strings[i].dot(&strings[j]) as i64, 1)
    }))
}

/// `⟨2 diag(a) - aaᵀ, y⟩ ≤ 1` in `COR(n)` coordinates. Off-diagonal
/// coefficients are doubled because `y_ij = y_ji` share one coordinate.
pub fn cor_inequality(a: &BitString) -> (Vec<Rational>, Rational) {
    let coeffs = cor_coordinates(a.len())
        .into_iter()
        .map(|(i, j)| {
            if i == j {
                if a.get(i) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            } else if a.get(i) && a.get(j) {
                rat(-2, 1)
            } else {
                Rational::zero()
            }
        })
        .collect();
    (coeffs, Rational::one())
}

/// All `2ⁿ` correlation inequalities, rows in lexicographic order of `a`.
pub fn cor_inequalities(n: usize) -> (RationalMatrix, Vec<Rational>) {
    let rows: Vec<Vec<Rational>> = BitString::all(n).map(|a| cor_inequality(&a).0).collect();
    let b = vec![Rational::one(); rows.len()];
    let a = RationalMatrix::from_rows_with_cols(rows, n * (n + 1) / 2).expect("uniform rows");
    (a, b)
}
