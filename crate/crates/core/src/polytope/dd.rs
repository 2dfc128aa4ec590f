//! Double description: extreme rays of a pointed polyhedral cone
//! `{z ∈ R^k | G z ≥ 0}`, computed incrementally with the combinatorial
//! adjacency test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exactmath::{Rational, RationalMatrix};

#[derive(Clone, Debug)]
struct Ray {
    v: Vec<BigInt>,
    zeros: Vec<u64>,
}

fn bit_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

fn contains(sup: &[u64], a: &[u64], b: &[u64]) -> bool {
    sup.iter().zip(a.iter().zip(b)).all(|(s, (x, y))| (x & y) & !s == 0)
}

pub(crate) fn primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

pub(crate) fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
    let mut v: Vec<BigInt> = row.iter().map(|e| e.numer() * (&l / e.denom())).collect();
    primitive(&mut v);
    v
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Extreme rays of `{z | G z ≥ 0}` as primitive integer vectors, sorted.
///
/// The cone must be pointed (`rank G = k`); otherwise an input error is
/// returned.
pub(crate) fn extreme_rays(g: &RationalMatrix, budget: &mut Budget) -> Result<Vec<Vec<BigInt>>> {
    let k = g.cols();
    let m = g.rows();
    let rows: Vec<Vec<BigInt>> = (0..m).map(|i| integer_row(g.row(i))).collect();
    let words = m.div_ceil(64).max(1);

    // greedy basis of k independent rows
    let mut basis: Vec<usize> = Vec::with_capacity(k);
    let mut acc = RationalMatrix::zeros(0, k);
    for i in 0..m {
        let cand = acc
            .vstack(&g.select_rows(&[i]))
            .expect("same column count");
        if cand.rank() > acc.rows() {
            acc = cand;
            basis.push(i);
            if basis.len() == k {
                break;
            }
        }
    }
    if basis.len() < k {
        return Err(Error::input("cone is not pointed (constraint rank below dimension)"));
    }

    // initial rays: columns of the inverse of the basis block
    let gb = g.select_rows(&basis);
    let mut rays: Vec<Ray> = Vec::with_capacity(k);
    for col in 0..k {
        let mut e = vec![Rational::zero(); k];
        e[col] = Rational::one();
        let sol = gb.solve(&e).expect("basis block is invertible");
        let v = integer_row(&sol);
        let mut zeros = vec![0u64; words];
        for (t, &bi) in basis.iter().enumerate() {
            if t != col {
                bit_set(&mut zeros, bi);
            }
        }
        rays.push(Ray { v, zeros });
    }

    let mut in_basis = vec![false; m];
    for &b in &basis {
        in_basis[b] = true;
    }
    for i in (0..m).filter(|&i| !in_basis[i]) {
        let h = &rows[i];
        let vals: Vec<BigInt> = rays.iter().map(|r| idot(h, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&t| vals[t].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&t| vals[t].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for (t, r) in rays.iter().enumerate() {
            if !vals[t].is_negative() {
                let mut r = r.clone();
                if vals[t].is_zero() {
                    bit_set(&mut r.zeros, i);
                }
                next.push(r);
            }
        }
        budget.tick((pos.len() * neg.len()) as u64 + 1, "double description")?;
        for &p in &pos {
            for &q in &neg {
                let (rp, rq) = (&rays[p], &rays[q]);
                if and_count(&rp.zeros, &rq.zeros) + 2 < k {
                    continue;
                }
                let adjacent = rays.iter().enumerate().all(|(t, r)| {
                    t == p || t == q || !contains(&r.zeros, &rp.zeros, &rq.zeros)
                });
                if !adjacent {
                    continue;
                }
                let mut v: Vec<BigInt> = rq
                    .v
                    .iter()
                    .zip(&rp.v)
                    .map(|(a, b)| &vals[p] * a - &vals[q] * b)
                    .collect();
                primitive(&mut v);
                let mut zeros: Vec<u64> =
                    rp.zeros.iter().zip(&rq.zeros).map(|(a, b)| a & b).collect();
                bit_set(&mut zeros, i);
                next.push(Ray { v, zeros });
            }
        }
        rays = next;
    }
    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}
