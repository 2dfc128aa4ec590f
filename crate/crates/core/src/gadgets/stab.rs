use std::fmt;

use num_traits::{One, Zero};

use super::Graph;
use crate::error::{Error, Result};
use crate::exactmath::{Rational, RationalMatrix};
use crate::polytope::{cor_coordinates, face_of, gen_stab, LinearMap, Point, Polytope};

/// Vertex of `H_n` (0-based indices).
///
/// `Node { i, bar }` is `ii` or `īī` of the vertex-clique of `i`;
/// `Edge { i, j, over, under }` with `i < j` is one of `ij`, `īj̄` (over),
/// `ij̲` (under) and the doubly marked vertex of the edge-clique of `ij`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HLabel {
    Node { i: usize, bar: bool },
    Edge { i: usize, j: usize, over: bool, under: bool },
}

impl HLabel {
    /// Vertex id of this label in [`build_h`]`(n)`.
    pub fn index(&self, n: usize) -> usize {
        match *self {
            HLabel::Node { i, bar } => 2 * i + bar as usize,
            HLabel::Edge { i, j, over, under } => {
                let pair = i * (2 * n - i - 1) / 2 + (j - i - 1);
                2 * n + 4 * pair + over as usize + 2 * under as usize
            }
        }
    }
}

impl fmt::Display for HLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            HLabel::Node { i, bar } => {
                write!(f, "{}{},{}", if bar { "~" } else { "" }, i + 1, i + 1)
            }
            HLabel::Edge { i, j, over, under } => write!(
                f,
                "{}{}{},{}",
                if over { "~" } else { "" },
                if under { "_" } else { "" },
                i + 1,
                j + 1
            ),
        }
    }
}

fn labels(n: usize) -> Vec<HLabel> {
    let mut out = Vec::with_capacity(2 * n + 2 * n * n.saturating_sub(1));
    for i in 0..n {
        out.push(HLabel::Node { i, bar: false });
        out.push(HLabel::Node { i, bar: true });
    }
    for i in 0..n {
        for j in i + 1..n {
            for (over, under) in [(false, false), (true, false), (false, true), (true, true)] {
                out.push(HLabel::Edge { i, j, over, under });
            }
        }
    }
    out
}

/// The stable-set gadget `H_n`: a 2-clique per node of `K_n`, a 4-clique
/// per edge, and eight connector edges per edge-clique.
pub fn build_h(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::input("H_n needs n >= 1"));
    }
    let mut g = Graph::new();
    for l in labels(n) {
        g.add_vertex(l.to_string())?;
    }
    let id = |l: HLabel| l.index(n);
    let node = |i, bar| id(HLabel::Node { i, bar });
    for i in 0..n {
        g.add_edge(node(i, false), node(i, true))?;
    }
    for i in 0..n {
        for j in i + 1..n {
            let e = |over, under| id(HLabel::Edge { i, j, over, under });
            let clique = [e(false, false), e(true, false), e(false, true), e(true, true)];
            for a in 0..4 {
                for b in a + 1..4 {
                    g.add_edge(clique[a], clique[b])?;
                }
            }
            let [plain, over, under, both] = clique;
            for (u, v) in [
                (plain, node(i, true)),
                (plain, node(j, true)),
                (over, node(i, false)),
                (over, node(j, true)),
                (under, node(i, true)),
                (under, node(j, false)),
                (both, node(i, false)),
                (both, node(j, false)),
            ] {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

fn face_size(n: usize) -> usize {
    n + n * (n - 1) / 2
}

/// Maximum stable sets of `H_n`, i.e. the vertices of the face `F`.
pub fn face_f_stable_sets(h: &Graph, n: usize) -> Result<Vec<Vec<usize>>> {
    if h.vertex_count() != 2 * n + 2 * n * (n - 1) {
        return Err(Error::input("graph is not H_n for this n"));
    }
    let sets = h.maximum_stable_sets();
    if sets.first().is_some_and(|s| s.len() != face_size(n)) {
        return Err(Error::input("maximum stable sets have unexpected size"));
    }
    Ok(sets)
}

/// `F` as a face of `STAB(H_n)`, cut out by `Σ x ≤ n + C(n, 2)`.
pub fn face_f(n: usize) -> Result<(Polytope, Polytope)> {
    let h = build_h(n)?;
    let stab = gen_stab(&h)?;
    let c = vec![Rational::one(); h.vertex_count()];
    let face = face_of(&stab, &c, &Rational::from_integer(face_size(n).into()))?;
    Ok((stab, face))
}

/// `π`: reads `y_ij` off the plain vertex `ij` (`i ≤ j`), in `COR(n)`
/// coordinates.
pub fn pi_stab_map(n: usize) -> LinearMap {
    let coords = cor_coordinates(n);
    let cols = 2 * n + 2 * n * n.saturating_sub(1);
    let mut m = RationalMatrix::zeros(coords.len(), cols);
    for (r, &(i, j)) in coords.iter().enumerate() {
        let l = if i == j {
            HLabel::Node { i, bar: false }
        } else {
            HLabel::Edge { i, j, over: false, under: false }
        };
        m[(r, l.index(n))] = Rational::one();
    }
    LinearMap::linear(m)
}

/// `π(χ^S)` for a stable set `S` on the face `F`.
pub fn project_pi_stab(set: &[usize], n: usize) -> Result<Point> {
    let h = build_h(n)?;
    if set.iter().any(|&v| v >= h.vertex_count()) || !h.is_stable(set) {
        return Err(Error::input("not a stable set of H_n"));
    }
    if set.len() != face_size(n) {
        return Err(Error::input("stable set does not lie on the face F"));
    }
    let mut x = vec![Rational::zero(); h.vertex_count()];
    for &v in set {
        x[v] = Rational::one();
    }
    pi_stab_map(n).apply(&x)
}
