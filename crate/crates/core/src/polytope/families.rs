//! Cut, correlation and stable-set polytopes.

use num_traits::{One, Zero};

use super::{LinearMap, Point, Polytope};
use crate::error::{Error, Result};
use crate::exactmath::{rat, Rational, RationalMatrix};
use crate::gadgets::Graph;

#[derive(Clone, Debug)]
pub enum PolytopeKind {
    Cut(usize),
    Cor(usize),
    Stab(Graph),
}

pub fn gen_polytope(kind: &PolytopeKind) -> Result<Polytope> {
    match kind {
        PolytopeKind::Cut(n) => gen_cut(*n),
        PolytopeKind::Cor(n) => gen_cor(*n),
        PolytopeKind::Stab(g) => gen_stab(g),
    }
}

/// Edges `(i, j)`, `i < j`, of `K_n` in lexicographic order (0-based).
pub fn cut_coordinates(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// Coordinates of `COR(n)`: the diagonal `(i, i)` first, then `(i, j)` with
/// `i < j` in lexicographic order (0-based).
pub fn cor_coordinates(n: usize) -> Vec<(usize, usize)> {
    let mut c: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
    c.extend(cut_coordinates(n));
    c
}

/// `bbᵀ` in [`cor_coordinates`] order.
pub fn cor_vertex(b: &[bool]) -> Point {
    cor_coordinates(b.len())
        .into_iter()
        .map(|(i, j)| {
            if b[i] && b[j] {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// `CUT(n)`: one vertex `χ^δ(X)` per cut, `X` ranging over subsets of the
/// first `n - 1` nodes (so complements are never both listed), ordered by
/// the bitmask of `X` with node 0 as least significant bit.
pub fn gen_cut(n: usize) -> Result<Polytope> {
    if n < 2 {
        return Err(Error::input("CUT(n) needs n >= 2"));
    }
    let edges = cut_coordinates(n);
    let verts: Vec<Point> = (0u64..1 << (n - 1))
        .map(|mask| {
            let side = |v: usize| v < n - 1 && mask >> v & 1 == 1;
            edges
                .iter()
                .map(|&(i, j)| {
                    if side(i) != side(j) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    Polytope::from_vertices(edges.len(), verts)
}

/// `b` for index `k` in lexicographic bit-string order (first bit most
/// significant).
pub(crate) fn bits_of(k: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| k >> (n - 1 - i) & 1 == 1).collect()
}

/// `COR(n)`: vertices `bbᵀ` for `b` in lexicographic order.
pub fn gen_cor(n: usize) -> Result<Polytope> {
    if n < 1 {
        return Err(Error::input("COR(n) needs n >= 1"));
    }
    let verts = (0..1usize << n).map(|k| cor_vertex(&bits_of(k, n))).collect();
    Polytope::from_vertices(n * (n + 1) / 2, verts)
}

/// `STAB(G)`: characteristic vectors of all stable sets, ordered by bitmask
/// (vertex 0 least significant).
pub fn gen_stab(g: &Graph) -> Result<Polytope> {
    let n = g.vertex_count();
    if n > 24 {
        return Err(Error::input("STAB(G) enumeration limited to 24 vertices"));
    }
    let verts = g
        .stable_sets()
        .into_iter()
        .map(|s| {
            let mut v = vec![Rational::zero(); n];
            for x in s {
                v[x] = Rational::one();
            }
            v
        })
        .collect();
    Polytope::from_vertices(n, verts)
}

/// The covariance map `CUT(n+1) → COR(n)` and its inverse.
///
/// Forward: `y_ii = x_{i,n+1}`, `y_ij = (x_{i,n+1} + x_{j,n+1} - x_ij) / 2`.
/// Inverse: `x_{i,n+1} = y_ii`, `x_ij = y_ii + y_jj - 2 y_ij`.
pub fn covariance_iso(n: usize) -> Result<(LinearMap, LinearMap)> {
    if n < 1 {
        return Err(Error::input("covariance map needs n >= 1"));
    }
    let cut = cut_coordinates(n + 1);
    let cor = cor_coordinates(n);
    let cut_idx = |i: usize, j: usize| {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        cut.iter().position(|&e| e == (a, b)).expect("edge of K_{n+1}")
    };
    let cor_idx = |i: usize, j: usize| {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        cor.iter().position(|&e| e == (a, b)).expect("COR coordinate")
    };
    let half = rat(1, 2);
    let mut fwd = RationalMatrix::zeros(cor.len(), cut.len());
    for (row, &(i, j)) in cor.iter().enumerate() {
        if i == j {
            fwd[(row, cut_idx(i, n))] = Rational::one();
        } else {
            fwd[(row, cut_idx(i, n))] = half.clone();
            fwd[(row, cut_idx(j, n))] = half.clone();
            fwd[(row, cut_idx(i, j))] = -half.clone();
        }
    }
    let mut inv = RationalMatrix::zeros(cut.len(), cor.len());
    for (row, &(i, j)) in cut.iter().enumerate() {
        if j == n {
            inv[(row, cor_idx(i, i))] = Rational::one();
        } else {
            inv[(row, cor_idx(i, i))] = Rational::one();
            inv[(row, cor_idx(j, j))] = Rational::one();
            inv[(row, cor_idx(i, j))] = rat(-2, 1);
        }
    }
    Ok((LinearMap::linear(fwd), LinearMap::linear(inv)))
}
