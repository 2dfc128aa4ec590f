use serde::{Deserialize, Serialize};

use super::Mat;
use crate::error::{Error, Result};

const MAX_DIM: usize = 512;
const MAX_SWEEPS: usize = 80;
/// Singular values at most this times the largest count as zero.
const RANK_TOL: f64 = 1e-9;

/// `A = U Σ V` with orthonormal columns in `U` (`m × p`), orthonormal rows
/// in `V` (`p × n`), `p = min(m, n)` and `Σ` descending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvdResult {
    pub u: Mat,
    pub sigma: Vec<f64>,
    pub v: Mat,
    pub rank: usize,
}

impl SvdResult {
    pub fn reconstruct(&self) -> Mat {
        let (m, n) = (self.u.len(), self.v.first().map_or(0, Vec::len));
        (0..m)
            .map(|i| {
                (0..n)
                    .map(|j| (0..self.sigma.len()).map(|k| self.u[i][k] * self.sigma[k] * self.v[k][j]).sum())
                    .collect()
            })
            .collect()
    }
}

fn transpose(a: &[Vec<f64>]) -> Mat {
    let n = a.first().map_or(0, Vec::len);
    (0..n).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// One-sided Jacobi SVD for small dense matrices.
pub fn svd_small(a: &[Vec<f64>]) -> Result<SvdResult> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 || n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(Error::dim("SVD input must be a nonempty rectangular matrix"));
    }
    if m > MAX_DIM || n > MAX_DIM {
        return Err(Error::input(format!("SVD input larger than {MAX_DIM}")));
    }
    if a.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("SVD input has a non-finite entry".into()));
    }
    if m < n {
        let t = svd_small(&transpose(a))?;
        return Ok(SvdResult {
            u: transpose(&t.v),
            sigma: t.sigma,
            v: transpose(&t.u),
            rank: t.rank,
        });
    }
    // columns of `w` are rotated until pairwise orthogonal; `q` accumulates
    // the rotations, so A Q = W
    let mut w: Mat = transpose(a);
    let mut q: Mat = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for r in p + 1..n {
                let alpha: f64 = w[p].iter().map(|x| x * x).sum();
                let beta: f64 = w[r].iter().map(|x| x * x).sum();
                let gamma: f64 = w[p].iter().zip(&w[r]).map(|(x, y)| x * y).sum();
                if gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for vecs in [&mut w, &mut q] {
                    let (lo, hi) = vecs.split_at_mut(r);
                    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                        let (xp, yr) = (*x, *y);
                        *x = c * xp - s * yr;
                        *y = s * xp + c * yr;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric("Jacobi SVD did not converge".into()));
    }
    let mut idx: Vec<(f64, usize)> = w
        .iter()
        .enumerate()
        .map(|(k, col)| (col.iter().map(|x| x * x).sum::<f64>().sqrt(), k))
        .collect();
    idx.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let top = idx[0].0;
    let rank = idx.iter().filter(|(s, _)| *s > RANK_TOL * top && *s > 0.0).count();
    let sigma: Vec<f64> = idx.iter().map(|&(s, _)| s).collect();
    let mut u_cols: Mat = Vec::with_capacity(n);
    for (pos, &(s, k)) in idx.iter().enumerate() {
        if pos < rank {
            u_cols.push(w[k].iter().map(|x| x / s).collect());
        } else {
            u_cols.push(complete_orthonormal(&u_cols, m));
        }
    }
    Ok(SvdResult {
        u: transpose(&u_cols),
        sigma,
        v: idx.iter().map(|&(_, k)| q[k].clone()).collect(),
        rank,
    })
}

/// A unit vector orthogonal to `basis` (which has fewer than `m` vectors).
fn complete_orthonormal(basis: &[Vec<f64>], m: usize) -> Vec<f64> {
    let mut best: (f64, Vec<f64>) = (-1.0, vec![0.0; m]);
    for e in 0..m {
        let mut v: Vec<f64> = (0..m).map(|i| if i == e { 1.0 } else { 0.0 }).collect();
        for _ in 0..2 {
            for b in basis {
                let d: f64 = b.iter().zip(&v).map(|(x, y)| x * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= d * bi;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > best.0 {
            best = (norm, v.into_iter().map(|x| x / norm).collect());
        }
        if best.0 > 0.5 {
            break;
        }
    }
    best.1
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
        a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> Mat {
        let mut cols: Mat = Vec::new();
        while cols.len() < n {
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for b in &cols {
                let d: f64 = b.iter().zip(&v).map(|(x, y)| x * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= d * bi;
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-3 {
                cols.push(v.into_iter().map(|x| x / norm).collect());
            }
        }
        cols
    }

    #[test]
    fn identity_and_diag() {
        let id = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let s = svd_small(&id).unwrap();
        assert_eq!(s.sigma, vec![1.0, 1.0]);
        let d = svd_small(&[vec![3.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(d.sigma, vec![3.0, 0.0]);
        assert_eq!(d.rank, 1);
    }

    #[test]
    fn recovers_planted_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let q1 = random_orthogonal(8, &mut rng);
        let q2 = random_orthogonal(8, &mut rng);
        let sig = [9.0, 7.5, 5.0, 3.25, 2.0, 1.0, 0.5, 0.0];
        let a: Mat = (0..8)
            .map(|i| (0..8).map(|j| (0..8).map(|k| q1[k][i] * sig[k] * q2[k][j]).sum()).collect())
            .collect();
        let s = svd_small(&a).unwrap();
        for (x, y) in s.sigma.iter().zip(sig) {
            assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
        assert_eq!(s.rank, 7);
        assert!(close(&s.reconstruct(), &a, 1e-8 * 9.0));
    }

    #[test]
    fn rectangular_both_ways() {
        let a = vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]];
        for m in [a.clone(), transpose(&a)] {
            let s = svd_small(&m).unwrap();
            assert_eq!(s.sigma.len(), 2);
            assert!(close(&s.reconstruct(), &m, 1e-10));
            assert_eq!(s.rank, 2);
        }
    }

    #[test]
    fn rank_deficient_has_orthonormal_u() {
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![0.0, 0.0]];
        let s = svd_small(&a).unwrap();
        assert_eq!(s.rank, 1);
        let ut = transpose(&s.u);
        for i in 0..2 {
            for j in 0..2 {
                let d: f64 = ut[i].iter().zip(&ut[j]).map(|(x, y)| x * y).sum();
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        assert!(close(&s.reconstruct(), &a, 1e-12));
    }
}
