use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::Verdict;
use crate::error::{Error, Result};
use crate::exactmath::{ldl_psd, Rational, RationalMatrix};
use crate::gadgets::BitString;

/// `M_ij = ⟨T_i, U^j⟩` with symmetric PSD `r × r` factors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdFactorization {
    pub r: usize,
    #[serde(rename = "T")]
    pub ts: Vec<RationalMatrix>,
    #[serde(rename = "U")]
    pub us: Vec<RationalMatrix>,
}

impl PsdFactorization {
    /// Checks shapes and symmetry; PSD-ness is certified by
    /// [`verify_psd_factorization`].
    pub fn new(r: usize, ts: Vec<RationalMatrix>, us: Vec<RationalMatrix>) -> Result<Self> {
        for f in ts.iter().chain(&us) {
            if f.shape() != (r, r) {
                return Err(Error::dim(format!("factor is {:?}, expected {r}x{r}", f.shape())));
            }
            if !f.is_symmetric() {
                return Err(Error::input("factor is not symmetric"));
            }
        }
        Ok(Self { r, ts, us })
    }

    /// The matrix `(⟨T_i, U^j⟩)_{ij}`.
    pub fn product(&self) -> RationalMatrix {
        let t: Vec<Scaled> = self.ts.iter().map(Scaled::new).collect();
        let u: Vec<Scaled> = self.us.iter().map(Scaled::new).collect();
        RationalMatrix::from_fn(t.len(), u.len(), |i, j| t[i].pair(&u[j]))
    }
}

/// A factor written as `entries / scale` with integer entries, so that the
/// pairing can run in machine integers when everything is small.
struct Scaled {
    scale: BigInt,
    big: Vec<BigInt>,
    small: Option<Vec<i64>>,
}

impl Scaled {
    fn new(m: &RationalMatrix) -> Self {
        let scale = m
            .entries()
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let big: Vec<BigInt> = m
            .entries()
            .iter()
            .map(|x| x.numer() * (&scale / x.denom()))
            .collect();
        // |entries| < 2^31 keeps every product and a sum of up to 2^64 of
        // them inside i128
        let small = big
            .iter()
            .map(|x| x.to_i64().filter(|v| v.unsigned_abs() < 1 << 31))
            .collect();
        Self { scale, big, small }
    }

    fn pair_scaled(&self, other: &Self) -> BigInt {
        if let (Some(a), Some(b)) = (&self.small, &other.small) {
            let s: i128 = a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum();
            return BigInt::from(s);
        }
        self.big.iter().zip(&other.big).map(|(x, y)| x * y).sum()
    }

    fn pair(&self, other: &Self) -> Rational {
        Rational::new(self.pair_scaled(other), &self.scale * &other.scale)
    }

    fn pair_equals(&self, other: &Self, target: &Rational) -> bool {
        let lhs = self.pair_scaled(other) * target.denom();
        let scales = &self.scale * &other.scale;
        lhs == target.numer() * scales
    }
}

/// Exact check of `⟨T_i, U^j⟩ = M_ij` for all entries plus an `LDLᵀ` PSD
/// certificate for every factor.
pub fn verify_psd_factorization(m: &RationalMatrix, f: &PsdFactorization) -> Result<Verdict> {
    if f.ts.len() != m.rows() || f.us.len() != m.cols() {
        return Err(Error::dim(format!(
            "{} row factors and {} column factors for a {}x{} matrix",
            f.ts.len(),
            f.us.len(),
            m.rows(),
            m.cols()
        )));
    }
    for (i, t) in f.ts.iter().enumerate() {
        if t.shape() != (f.r, f.r) || ldl_psd(t).is_none() {
            return Ok(Verdict::fail(i, 0, "T_i is not a symmetric PSD matrix"));
        }
    }
    for (j, u) in f.us.iter().enumerate() {
        if u.shape() != (f.r, f.r) || ldl_psd(u).is_none() {
            return Ok(Verdict::fail(0, j, "U^j is not a symmetric PSD matrix"));
        }
    }
    let t: Vec<Scaled> = f.ts.iter().map(Scaled::new).collect();
    let u: Vec<Scaled> = f.us.iter().map(Scaled::new).collect();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !t[i].pair_equals(&u[j], &m[(i, j)]) {
                return Ok(Verdict::fail(i, j, "trace product differs from the matrix"));
            }
        }
    }
    Ok(Verdict::Pass)
}

fn outer(v: &[Rational]) -> RationalMatrix {
    RationalMatrix::from_fn(v.len(), v.len(), |i, j| &v[i] * &v[j])
}

/// `T_a = (1, -a)(1, -a)ᵀ`, `U^b = (1, b)(1, b)ᵀ`: a rank-`(n+1)` PSD
/// factorization of `M(n)`, rows and columns in lexicographic order.
pub fn explicit_psd_factorization_m(n: usize) -> Result<PsdFactorization> {
    if n < 1 {
        return Err(Error::input("n must be at least 1"));
    }
    if n > crate::gadgets::MAX_M_SIZE {
        return Err(Error::input("n exceeds the size guard for M(n)"));
    }
    let vec_of = |b: &BitString, sign: i64| -> Vec<Rational> {
        std::iter::once(Rational::one())
            .chain(b.bits().iter().map(|&x| Rational::from_integer((sign * x as i64).into())))
            .collect()
    };
    let all: Vec<BitString> = BitString::all(n).collect();
    let ts = all.iter().map(|a| outer(&vec_of(a, -1))).collect();
    let us = all.iter().map(|b| outer(&vec_of(b, 1))).collect();
    PsdFactorization::new(n + 1, ts, us)
}

/// PSD factorization of `M = N ∘ N` of rank `rank(N) + 1`.
///
/// With an exact rank factorization `N = C R` and `Δ = max_i ‖C_i‖₁`,
/// `T_i = C_iC_iᵀ/Δ² ⊕ (1 - ‖C_i‖²/Δ²)` and `U^j = Δ² R^j R^jᵀ ⊕ 0`;
/// every `T_i` has trace 1.
pub fn psd_rank_upper_from_sqrt(m: &RationalMatrix, n: &RationalMatrix) -> Result<PsdFactorization> {
    if m.shape() != n.shape() {
        return Err(Error::dim("M and N differ in shape"));
    }
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if m[(i, j)] != &n[(i, j)] * &n[(i, j)] {
                return Err(Error::input(format!("M_{i}{j} is not the square of N_{i}{j}")));
            }
        }
    }
    let (c, r) = n.rank_factorization();
    let rho = c.cols();
    let delta = (0..c.rows())
        .map(|i| c.row(i).iter().fold(Rational::zero(), |s, x| s + x.abs()))
        .max()
        .unwrap_or_else(Rational::zero);
    let dim = rho + 1;
    let ts = (0..c.rows())
        .map(|i| {
            let ci = c.row(i);
            let mut t = RationalMatrix::zeros(dim, dim);
            let mut norm2 = Rational::zero();
            if !delta.is_zero() {
                let d2 = &delta * &delta;
                for a in 0..rho {
                    norm2 += &ci[a] * &ci[a];
                    for b in 0..rho {
                        t[(a, b)] = &ci[a] * &ci[b] / &d2;
                    }
                }
                norm2 /= d2;
            }
            t[(rho, rho)] = Rational::one() - norm2;
            t
        })
        .collect();
    let us = (0..r.cols())
        .map(|j| {
            let mut u = RationalMatrix::zeros(dim, dim);
            let d2 = &delta * &delta;
            for a in 0..rho {
                for b in 0..rho {
                    u[(a, b)] = &r[(a, j)] * &r[(b, j)] * &d2;
                }
            }
            u
        })
        .collect();
    PsdFactorization::new(dim, ts, us)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use crate::gadgets::{matrix_m, matrix_n};

    #[test]
    fn explicit_small_cases() {
        let f = explicit_psd_factorization_m(1).unwrap();
        assert_eq!(f.ts[1], RationalMatrix::from_i64(&[vec![1, -1], vec![-1, 1]]));
        assert_eq!(f.us[1], RationalMatrix::from_i64(&[vec![1, 1], vec![1, 1]]));
        assert_eq!(f.ts[1].frobenius(&f.us[1]).unwrap(), rat(0, 1));
        assert_eq!(f.ts[0], RationalMatrix::from_i64(&[vec![1, 0], vec![0, 0]]));
        let f2 = explicit_psd_factorization_m(2).unwrap();
        // a = 10, b = 11
        assert_eq!(f2.ts[2].frobenius(&f2.us[3]).unwrap(), rat(0, 1));
        for n in 1..=5 {
            let f = explicit_psd_factorization_m(n).unwrap();
            assert!(verify_psd_factorization(&matrix_m(n).unwrap(), &f).unwrap().passed());
        }
    }

    #[test]
    fn perturbation_is_located() {
        let m = matrix_m(2).unwrap();
        let mut f = explicit_psd_factorization_m(2).unwrap();
        f.us[1][(0, 0)] += rat(1, 1);
        assert_eq!(
            verify_psd_factorization(&m, &f).unwrap(),
            Verdict::fail(0, 1, "trace product differs from the matrix")
        );
        let mut g = explicit_psd_factorization_m(2).unwrap();
        g.ts[3][(1, 1)] = rat(-1, 1);
        assert!(matches!(verify_psd_factorization(&m, &g).unwrap(), Verdict::Fail { row: 3, .. }));
    }

    #[test]
    fn zero_matrix() {
        let z = RationalMatrix::zeros(2, 3);
        let f = PsdFactorization::new(
            1,
            vec![RationalMatrix::zeros(1, 1); 2],
            vec![RationalMatrix::zeros(1, 1); 3],
        )
        .unwrap();
        assert!(verify_psd_factorization(&z, &f).unwrap().passed());
        let g = psd_rank_upper_from_sqrt(&z, &z).unwrap();
        assert_eq!(g.r, 1);
        assert!(verify_psd_factorization(&z, &g).unwrap().passed());
    }

    #[test]
    fn from_sqrt() {
        let ones = RationalMatrix::from_i64(&[vec![1, 1], vec![1, 1]]);
        let f = psd_rank_upper_from_sqrt(&ones, &ones).unwrap();
        assert_eq!(f.r, 2);
        assert!(verify_psd_factorization(&ones, &f).unwrap().passed());
        let m1 = matrix_m(1).unwrap();
        let f = psd_rank_upper_from_sqrt(&m1, &m1).unwrap();
        assert_eq!(f.r, 3);
        assert!(verify_psd_factorization(&m1, &f).unwrap().passed());
        for n in 1..=4 {
            let m = matrix_m(n).unwrap();
            let nn = matrix_n(n).unwrap();
            let f = psd_rank_upper_from_sqrt(&m, &nn).unwrap();
            assert_eq!(f.r, nn.rank() + 1);
            assert!(verify_psd_factorization(&m, &f).unwrap().passed());
            assert!(f.ts.iter().all(|t| t.trace() == rat(1, 1)));
        }
        assert!(psd_rank_upper_from_sqrt(&m1, &ones).is_err());
    }

    #[test]
    fn big_entries_take_the_slow_path() {
        let big = rat(1 << 40, 3);
        let t = RationalMatrix::from_fn(1, 1, |_, _| big.clone());
        let f = PsdFactorization::new(1, vec![t], vec![RationalMatrix::identity(1)]).unwrap();
        let m = RationalMatrix::from_fn(1, 1, |_, _| big.clone());
        assert!(verify_psd_factorization(&m, &f).unwrap().passed());
        assert_eq!(f.product(), m);
    }
}
