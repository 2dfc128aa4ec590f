use num_traits::{Signed, Zero};

use super::matrix::RationalMatrix;
use super::rational::Rational;

/// Certificate `Pᵀ M P = L D Lᵀ` with `L` unit lower triangular, `D`
/// diagonal and nonnegative; `perm[k]` is the original index placed at
/// position `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ldl {
    pub perm: Vec<usize>,
    pub l: RationalMatrix,
    pub d: Vec<Rational>,
}

impl Ldl {
    /// Rebuilds `M` from the factors.
    pub fn reconstruct(&self) -> RationalMatrix {
        let n = self.d.len();
        let mut dl = self.l.transpose();
        for i in 0..n {
            for j in 0..n {
                let v = &dl[(i, j)] * &self.d[i];
                dl[(i, j)] = v;
            }
        }
        let pmp = self.l.mul(&dl).expect("square factors");
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(self.perm[i], self.perm[j])] = pmp[(i, j)].clone();
            }
        }
        m
    }
}

/// Exact `LDLᵀ` with symmetric diagonal pivoting. Returns `None` unless the
/// matrix is symmetric positive semidefinite.
///
/// A zero pivot is acceptable only if its whole remaining row is zero; such
/// rows are eliminated without contributing to `L`.
pub fn ldl_psd(m: &RationalMatrix) -> Option<Ldl> {
    if !m.is_symmetric() {
        return None;
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut l = RationalMatrix::identity(n);
    let mut d = vec![Rational::zero(); n];
    for k in 0..n {
        if (k..n).any(|i| a[(i, i)].is_negative()) {
            return None;
        }
        let pivot = (k..n).find(|&i| a[(i, i)].is_positive());
        let Some(p) = pivot else {
            // all remaining diagonal entries vanish: the trailing block must be zero
            let trailing_zero = (k..n).all(|i| (k..n).all(|j| a[(i, j)].is_zero()));
            return trailing_zero.then_some(Ldl { perm, l, d });
        };
        if p != k {
            a.swap_rows(k, p);
            a.swap_cols(k, p);
            perm.swap(k, p);
            for j in 0..k {
                let tmp = l[(k, j)].clone();
                l[(k, j)] = l[(p, j)].clone();
                l[(p, j)] = tmp;
            }
        }
        let piv = a[(k, k)].clone();
        d[k] = piv.clone();
        for i in k + 1..n {
            let f = &a[(i, k)] / &piv;
            l[(i, k)] = f.clone();
            if f.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let v = &f * &a[(k, j)];
                a[(i, j)] -= v;
            }
        }
        for i in k + 1..n {
            a[(i, k)] = Rational::zero();
            a[(k, i)] = Rational::zero();
        }
    }
    Some(Ldl { perm, l, d })
}
