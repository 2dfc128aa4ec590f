use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactmath::{from_f64_bounded, lp_solve, rat_rank, LpStatus, Rational, RationalMatrix, Sense};
use crate::factorization::{verify_nonneg_factorization, NonnegFactorization};

const ROUNDING_WINDOW: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct NmfOptions {
    /// Relative Frobenius residual at which a float solution is accepted
    /// for rationalization.
    pub tolerance: f64,
    pub seed: u64,
    pub max_iter: usize,
    pub restarts: usize,
}

impl Default for NmfOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            seed: 0,
            max_iter: 5000,
            restarts: 8,
        }
    }
}

/// Searches for a nonnegative factorization of inner dimension `r`.
/// Only exactly verified factorizations are returned.
pub fn nmf_heuristic(m: &RationalMatrix, r: usize, tolerance: f64, seed: u64) -> Result<Option<NonnegFactorization>> {
    nmf_heuristic_with(
        m,
        r,
        &NmfOptions {
            tolerance,
            seed,
            ..NmfOptions::default()
        },
    )
}

pub fn nmf_heuristic_with(m: &RationalMatrix, r: usize, opts: &NmfOptions) -> Result<Option<NonnegFactorization>> {
    if r == 0 {
        return Err(Error::input("r must be at least 1"));
    }
    if !m.is_nonnegative() {
        return Err(Error::input("matrix has a negative entry"));
    }
    let (rows, cols) = m.shape();
    if r >= rows.min(cols) {
        return padded_trivial(m, r).map(Some);
    }
    if r < rat_rank(m) {
        return Ok(None);
    }
    let target = m.to_f64_rows();
    let norm = target.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        let mut w: Vec<Vec<f64>> = (0..rows).map(|_| (0..r).map(|_| rng.gen_range(0.1..1.0)).collect()).collect();
        let mut h: Vec<Vec<f64>> = (0..r).map(|_| (0..cols).map(|_| rng.gen_range(0.1..1.0)).collect()).collect();
        for it in 0..opts.max_iter {
            multiplicative_step(&target, &mut w, &mut h);
            if it % 50 == 0 && residual(&target, &w, &h) <= opts.tolerance * norm.max(1.0) {
                break;
            }
        }
        // rounding often recovers the exact factor long before the float
        // iteration meets the tolerance
        if residual(&target, &w, &h) > ROUNDING_WINDOW * norm.max(1.0) {
            continue;
        }
        normalize_columns(&mut w, &mut h);
        if let Some(f) = rationalize(m, &w, &h)? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

fn padded_trivial(m: &RationalMatrix, r: usize) -> Result<NonnegFactorization> {
    let (rows, cols) = m.shape();
    let (t, u) = if rows <= cols {
        (RationalMatrix::identity(rows), m.clone())
    } else {
        (m.clone(), RationalMatrix::identity(cols))
    };
    let k = t.cols();
    let t = t.hstack(&RationalMatrix::zeros(rows, r - k))?;
    let u = u.vstack(&RationalMatrix::zeros(r - k, cols))?;
    NonnegFactorization::new(t, u)
}

fn product(w: &[Vec<f64>], h: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let cols = h.first().map_or(0, Vec::len);
    w.iter()
        .map(|wi| (0..cols).map(|j| wi.iter().zip(h).map(|(a, hk)| a * hk[j]).sum()).collect())
        .collect()
}

fn residual(v: &[Vec<f64>], w: &[Vec<f64>], h: &[Vec<f64>]) -> f64 {
    let p = product(w, h);
    v.iter()
        .zip(&p)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)))
        .sum::<f64>()
        .sqrt()
}

fn multiplicative_step(v: &[Vec<f64>], w: &mut [Vec<f64>], h: &mut [Vec<f64>]) {
    const EPS: f64 = 1e-300;
    let (rows, r, cols) = (w.len(), h.len(), v[0].len());
    // H <- H .* (WᵀV) ./ (WᵀWH)
    let p = product(w, h);
    for k in 0..r {
        for j in 0..cols {
            let num: f64 = (0..rows).map(|i| w[i][k] * v[i][j]).sum();
            let den: f64 = (0..rows).map(|i| w[i][k] * p[i][j]).sum();
            h[k][j] *= num / (den + EPS);
        }
    }
    // W <- W .* (VHᵀ) ./ (WHHᵀ)
    let p = product(w, h);
    for i in 0..rows {
        for k in 0..r {
            let num: f64 = (0..cols).map(|j| v[i][j] * h[k][j]).sum();
            let den: f64 = (0..cols).map(|j| p[i][j] * h[k][j]).sum();
            w[i][k] *= num / (den + EPS);
        }
    }
}

/// Rescales so every column of `w` has maximum 1.
fn normalize_columns(w: &mut [Vec<f64>], h: &mut [Vec<f64>]) {
    for k in 0..h.len() {
        let mx = w.iter().map(|row| row[k]).fold(0.0, f64::max);
        if mx > 0.0 {
            for row in w.iter_mut() {
                row[k] /= mx;
            }
            for x in h[k].iter_mut() {
                *x *= mx;
            }
        }
    }
}

fn round_matrix(a: &[Vec<f64>], cap: u64, snap: f64) -> Option<RationalMatrix> {
    let scale = a.iter().flatten().fold(0.0, |m: f64, x| m.max(x.abs()));
    let rows = a
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| {
                    if x <= snap * scale.max(1.0) {
                        Some(Rational::zero())
                    } else {
                        from_f64_bounded(x, cap)
                    }
                })
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    RationalMatrix::from_rows(rows).ok()
}

/// Column `j` of `U ≥ 0` with `T u = m_j`, by exact LP.
fn solve_nonneg(t: &RationalMatrix, rhs: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let r = t.cols();
    let neg_id = RationalMatrix::identity(r).scale(&-Rational::from_integer(1.into()));
    let zeros = vec![Rational::zero(); r];
    let res = lp_solve(&neg_id, &zeros, &zeros, Sense::Max, Some((t, rhs)))?;
    Ok(match res.status {
        LpStatus::Optimal => res.primal,
        _ => None,
    })
}

fn complete_factor(m: &RationalMatrix, t: &RationalMatrix) -> Result<Option<RationalMatrix>> {
    let mut cols = Vec::with_capacity(m.cols());
    for j in 0..m.cols() {
        match solve_nonneg(t, &m.column(j))? {
            Some(u) => cols.push(u),
            None => return Ok(None),
        }
    }
    Ok(Some(RationalMatrix::from_rows(cols)?.transpose()))
}

fn rationalize(m: &RationalMatrix, w: &[Vec<f64>], h: &[Vec<f64>]) -> Result<Option<NonnegFactorization>> {
    let ht: Vec<Vec<f64>> = (0..h[0].len()).map(|j| h.iter().map(|row| row[j]).collect()).collect();
    let mt = m.transpose();
    for cap in [10u64, 100, 1_000, 10_000, 100_000, 1_000_000] {
        for snap in [1e-6, 1e-9, 0.0] {
            if let Some(t) = round_matrix(w, cap, snap) {
                if let Some(u) = complete_factor(m, &t)? {
                    let f = NonnegFactorization::new(t, u)?;
                    if verify_nonneg_factorization(m, &f)?.passed() {
                        return Ok(Some(f));
                    }
                }
            }
            if let Some(ut) = round_matrix(&ht, cap, snap) {
                if let Some(tt) = complete_factor(&mt, &ut)? {
                    let f = NonnegFactorization::new(tt.transpose(), ut.transpose())?;
                    if verify_nonneg_factorization(m, &f)?.passed() {
                        return Ok(Some(f));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::matrix_m;

    #[test]
    fn ones_rank_one() {
        let ones = RationalMatrix::from_i64(&[vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 1]]);
        let f = nmf_heuristic(&ones, 1, 1e-10, 7).unwrap().unwrap();
        assert_eq!(f.product(), ones);
        assert_eq!(f.t, RationalMatrix::from_i64(&[vec![1], vec![1], vec![1]]));
    }

    #[test]
    fn m1_cases() {
        let m1 = matrix_m(1).unwrap();
        let f = nmf_heuristic(&m1, 2, 1e-10, 0).unwrap().unwrap();
        assert!(verify_nonneg_factorization(&m1, &f).unwrap().passed());
        assert!(nmf_heuristic(&m1, 1, 1e-10, 0).unwrap().is_none());
    }

    #[test]
    fn finds_nontrivial_factorization() {
        // rank 2 product of nonnegative factors, 4×4
        let t = RationalMatrix::from_i64(&[vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1]]);
        let u = RationalMatrix::from_i64(&[vec![1, 2, 0, 1], vec![0, 1, 3, 1]]);
        let m = t.mul(&u).unwrap();
        let f = nmf_heuristic(&m, 2, 1e-12, 3).unwrap().expect("factorization");
        assert_eq!(f.inner_dim(), 2);
        assert!(verify_nonneg_factorization(&m, &f).unwrap().passed());
    }

    #[test]
    fn padded_when_r_large() {
        let m1 = matrix_m(1).unwrap();
        let f = nmf_heuristic(&m1, 3, 1e-10, 0).unwrap().unwrap();
        assert_eq!(f.inner_dim(), 3);
        assert_eq!(f.product(), m1);
    }
}
