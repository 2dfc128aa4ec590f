use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dim(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds from rows; all rows must have equal length. An empty row list
    /// gives a `0 x cols` matrix only through [`RationalMatrix::zeros`].
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::dim("ragged rows"));
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_rows_with_cols(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        if rows.iter().any(|row| row.len() != cols) {
            return Err(Error::dim("row length differs from column count"));
        }
        let r = rows.len();
        Ok(Self {
            rows: r,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn column_vector(v: &[Rational]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            entries: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::dim(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::dim("shape mismatch in addition"));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(Error::dim("vstack column mismatch"));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Self {
            rows: self.rows + other.rows,
            cols,
            entries,
        })
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::dim("hstack row mismatch"));
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        }))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| !e.is_negative())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Frobenius product `Σ_ij A_ij B_ij`.
    pub fn frobenius(&self, other: &Self) -> Result<Rational> {
        if self.shape() != other.shape() {
            return Err(Error::dim("shape mismatch in Frobenius product"));
        }
        Ok(dot(&self.entries, &other.entries))
    }

    pub fn support(&self) -> BooleanMatrix {
        BooleanMatrix {
            rows: self.rows,
            cols: self.cols,
            bits: self.entries.iter().map(|e| !e.is_zero()).collect(),
        }
    }

    /// Each row scaled by the lcm of its denominators, as integers.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row
                    .iter()
                    .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
                row.iter()
                    .map(|e| e.numer() * (&l / e.denom()))
                    .collect()
            })
            .collect()
    }

    /// Exact rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.integer_rows();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..n {
            if rank == m {
                break;
            }
            let Some(p) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in rank + 1..m {
                for c in col + 1..n {
                    let v = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
                    a[r][c] = v;
                }
                a[r][col] = BigInt::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form and the pivot columns.
    /// Rank over `Z/pZ` for a prime `p < 2^63`. Never exceeds the rational
    /// rank; errors if a denominator is divisible by `p`.
    pub fn rank_mod_prime(&self, p: u64) -> Result<usize> {
        let reduce = |x: &Rational| -> Option<u64> {
            let pb = BigInt::from(p);
            let num = x.numer().mod_floor(&pb).to_u64()?;
            let den = x.denom().mod_floor(&pb).to_u64()?;
            (den != 0).then(|| mul_mod(num, pow_mod(den, p - 2, p), p))
        };
        let mut a: Vec<Vec<u64>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = self
                .row(i)
                .iter()
                .map(reduce)
                .collect::<Option<Vec<u64>>>()
                .ok_or_else(|| Error::input(format!("denominator divisible by {p}")))?;
            a.push(row);
        }
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&i| a[i][c] != 0) else { continue };
            a.swap(rank, piv);
            let inv = pow_mod(a[rank][c], p - 2, p);
            let pivot_row: Vec<u64> = a[rank].iter().map(|&x| mul_mod(x, inv, p)).collect();
            for row in a.iter_mut().skip(rank + 1) {
                let f = row[c];
                if f != 0 {
                    for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                        *x = (*x + p - mul_mod(f, y, p)) % p;
                    }
                }
            }
            a[rank] = pivot_row;
            rank += 1;
        }
        Ok(rank)
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a[(r, c)].recip();
            for j in c..self.cols {
                let v = &a[(r, j)] * &inv;
                a[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in c..self.cols {
                    let v = &a[(r, j)] * &f;
                    a[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Basis of `{x : self · x = 0}` as a list of vectors.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Exact rank factorization `self = C · R` with `C` the pivot columns of
    /// `self` (`m x r`) and `R` the nonzero rows of the RREF (`r x n`).
    pub fn rank_factorization(&self) -> (Self, Self) {
        let (rref, pivots) = self.rref();
        let c = self.select_cols(&pivots);
        let r = rref.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        let r = if pivots.is_empty() {
            Self::zeros(0, self.cols)
        } else {
            r
        };
        (c, r)
    }

    /// Some solution of `self · x = rhs`, if consistent.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        if rhs.len() != self.rows {
            return None;
        }
        let aug = self.hstack(&Self::column_vector(rhs)).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| super::rational::vec_to_f64(self.row(i)))
            .collect()
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(format_rational).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(d)?;
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(D::Error::custom("entries do not match rows/cols"));
        }
        let entries = repr
            .entries
            .iter()
            .flatten()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(Self {
            rows: repr.rows,
            cols: repr.cols,
            entries,
        })
    }
}

/// Row-major 0/1 matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BooleanMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl BooleanMatrix {
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(Error::dim("ragged rows"));
        }
        Ok(Self {
            rows: rows.len(),
            cols: c,
            bits: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_u8(rows: &[Vec<u8>]) -> Self {
        Self::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&b| b != 0).collect())
                .collect::<Vec<_>>(),
        )
        .expect("rectangular literal")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                bits.push(f(i, j));
            }
        }
        Self { rows, cols, bits }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.cols + j]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows)
            .flat_map(move |i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j))
    }

    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(row_perm[i], col_perm[j]))
    }

    pub fn to_u8_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }
}

impl fmt::Debug for BooleanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BooleanMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_u8_rows() {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use proptest::prelude::*;

    fn m1() -> RationalMatrix {
        RationalMatrix::from_i64(&[vec![1, 1], vec![1, 0]])
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RationalMatrix::identity(2).rank(), 2);
        assert_eq!(m1().rank(), 2);
        assert_eq!(RationalMatrix::zeros(3, 3).rank(), 0);
        let dependent = RationalMatrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(dependent.rank(), 2);
    }

    #[test]
    fn modular_rank() {
        const P: u64 = (1 << 61) - 1;
        let dependent = RationalMatrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(dependent.rank_mod_prime(P).unwrap(), 2);
        assert_eq!(m1().rank_mod_prime(P).unwrap(), 2);
        // singular mod 5 only
        let m = RationalMatrix::from_i64(&[vec![1, 2], vec![3, 1]]);
        assert_eq!(m.rank_mod_prime(5).unwrap(), 1);
        assert_eq!(m.rank_mod_prime(7).unwrap(), 2);
        let half = RationalMatrix::from_rows(vec![vec![crate::exactmath::rat(1, 2)]]).unwrap();
        assert_eq!(half.rank_mod_prime(P).unwrap(), 1);
        assert!(half.rank_mod_prime(2).is_err());
    }

    #[test]
    fn support_examples() {
        assert_eq!(m1().support(), BooleanMatrix::from_u8(&[vec![1, 1], vec![1, 0]]));
        assert_eq!(
            RationalMatrix::zeros(2, 3).support(),
            BooleanMatrix::from_u8(&[vec![0, 0, 0], vec![0, 0, 0]])
        );
    }

    #[test]
    fn json_codec() {
        let m = RationalMatrix::from_rows(vec![vec![rat(1, 2), rat(-3, 1)], vec![rat(0, 1), rat(7, 9)]])
            .unwrap();
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"{"rows":2,"cols":2,"entries":[["1/2","-3"],["0","7/9"]]}"#);
        let back: RationalMatrix = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<RationalMatrix>(r#"{"rows":1,"cols":2,"entries":[["1"]]}"#).is_err());
        assert!(serde_json::from_str::<RationalMatrix>(r#"{"rows":1,"cols":1,"entries":[["0.5"]]}"#).is_err());
    }

    #[test]
    fn rank_factorization_reconstructs() {
        let n = RationalMatrix::from_i64(&[vec![1, 1, 0], vec![2, 2, 0], vec![0, 1, 1]]);
        let (c, r) = n.rank_factorization();
        assert_eq!(c.cols(), 2);
        assert_eq!(c.mul(&r).unwrap(), n);
    }

    #[test]
    fn nullspace_and_solve() {
        let a = RationalMatrix::from_i64(&[vec![1, 1, 1], vec![0, 1, 2]]);
        for v in a.nullspace() {
            assert!(a.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
        }
        assert_eq!(a.nullspace().len(), 1);
        let x = a.solve(&[rat(3, 1), rat(3, 1)]).unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![rat(3, 1), rat(3, 1)]);
        let inconsistent = RationalMatrix::from_i64(&[vec![1, 1], vec![1, 1]]);
        assert!(inconsistent.solve(&[rat(0, 1), rat(1, 1)]).is_none());
    }

    fn small_matrix() -> impl Strategy<Value = RationalMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-3i64..4, 1i64..4), r * c).prop_map(move |v| {
                RationalMatrix::from_entries(r, c, v.into_iter().map(|(p, q)| rat(p, q)).collect())
                    .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_transpose_invariant(m in small_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn bareiss_matches_rref(m in small_matrix()) {
            prop_assert_eq!(m.rank(), m.rref().1.len());
        }

        #[test]
        fn support_marks_nonzeros(m in small_matrix()) {
            let s = m.support();
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    prop_assert_eq!(s.get(i, j), !m[(i, j)].is_zero());
                }
            }
        }
    }
}
