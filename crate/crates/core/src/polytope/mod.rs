//! Exact polytopes in paired V/H representation.
//!
//! Conversions run the double description method from [`dd`]; non
//! full-dimensional polytopes carry an explicit equality system for their
//! affine hull and facets are irredundant relative to it.

mod dd;
mod families;

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exactmath::{
    dot, format_rational, lp_solve, parse_rational, LpStatus, Rational, RationalMatrix, Sense,
};

pub use families::{
    cor_coordinates, cor_vertex, covariance_iso, cut_coordinates, gen_cor, gen_cut, gen_polytope,
    gen_stab, PolytopeKind,
};

pub type Point = Vec<Rational>;

/// `A x ≤ b` (or `= b` when used for equalities).
pub type LinearSystem = (RationalMatrix, Vec<Rational>);

#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Option<Vec<Point>>,
    inequalities: Option<LinearSystem>,
    equalities: Option<LinearSystem>,
}

impl Polytope {
    /// V-representation from a list of points that are all vertices; exact
    /// duplicates are dropped, order is preserved.
    pub fn from_vertices(dim: usize, vertices: Vec<Point>) -> Result<Self> {
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::dim("vertex has wrong ambient dimension"));
        }
        let mut uniq: Vec<Point> = Vec::with_capacity(vertices.len());
        for v in vertices {
            if !uniq.contains(&v) {
                uniq.push(v);
            }
        }
        Ok(Self {
            dim,
            vertices: Some(uniq),
            inequalities: None,
            equalities: None,
        })
    }

    /// V-representation from arbitrary points; points that are convex
    /// combinations of the others are removed (exact LP per point).
    pub fn from_points(dim: usize, points: Vec<Point>) -> Result<Self> {
        let p = Self::from_vertices(dim, points)?;
        let pts = p.vertices.unwrap_or_default();
        let mut keep: Vec<Point> = Vec::new();
        for (i, x) in pts.iter().enumerate() {
            let others: Vec<Point> = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.clone())
                .collect();
            if convex_combination(&others, x)?.is_none() {
                keep.push(x.clone());
            }
        }
        Self::from_vertices(dim, keep)
    }

    pub fn from_hrep(
        dim: usize,
        inequalities: LinearSystem,
        equalities: Option<LinearSystem>,
    ) -> Result<Self> {
        check_system(dim, &inequalities)?;
        if let Some(eq) = &equalities {
            check_system(dim, eq)?;
        }
        Ok(Self {
            dim,
            vertices: None,
            inequalities: Some(inequalities),
            equalities,
        })
    }

    /// Vertices together with a system of valid inequalities that need not
    /// describe the hull completely (e.g. a subset of the facets). Every
    /// vertex must satisfy every row.
    pub fn from_parts(
        dim: usize,
        vertices: Vec<Point>,
        inequalities: LinearSystem,
        equalities: Option<LinearSystem>,
    ) -> Result<Self> {
        let v = Self::from_vertices(dim, vertices)?;
        check_system(dim, &inequalities)?;
        slack_matrix(&inequalities.0, &inequalities.1, v.require_vertices()?)?;
        if let Some(eq) = &equalities {
            check_system(dim, eq)?;
            let (c, d) = eq;
            for p in v.require_vertices()? {
                if c.mul_vec(p)? != *d {
                    return Err(Error::input("vertex violates an equality"));
                }
            }
        }
        Ok(Self {
            inequalities: Some(inequalities),
            equalities,
            ..v
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> Option<&[Point]> {
        self.vertices.as_deref()
    }

    pub fn inequalities(&self) -> Option<(&RationalMatrix, &[Rational])> {
        self.inequalities.as_ref().map(|(a, b)| (a, b.as_slice()))
    }

    pub fn equalities(&self) -> Option<(&RationalMatrix, &[Rational])> {
        self.equalities.as_ref().map(|(a, b)| (a, b.as_slice()))
    }

    /// Returns a copy with the H-representation filled in (computed from the
    /// vertices if missing).
    pub fn with_hrep(&self, budget: Option<&mut Budget>) -> Result<Self> {
        if self.inequalities.is_some() {
            return Ok(self.clone());
        }
        let verts = self.require_vertices()?;
        let h = hull_facets_budgeted(self.dim, verts, budget)?;
        Ok(Self {
            vertices: self.vertices.clone(),
            ..h
        })
    }

    /// Returns a copy with the V-representation filled in.
    pub fn with_vrep(&self, budget: Option<&mut Budget>) -> Result<Self> {
        if self.vertices.is_some() {
            return Ok(self.clone());
        }
        let (a, b) = self
            .inequalities
            .as_ref()
            .ok_or_else(|| Error::input("polytope has neither representation"))?;
        let eq = self.equalities.as_ref().map(|(c, d)| (c, d.as_slice()));
        let v = vertices_from_hrep_budgeted(a, b, eq, budget)?;
        Ok(Self {
            vertices: Some(v),
            ..self.clone()
        })
    }

    pub fn require_vertices(&self) -> Result<&[Point]> {
        self.vertices()
            .ok_or_else(|| Error::input("polytope has no V-representation"))
    }

    pub fn require_inequalities(&self) -> Result<(&RationalMatrix, &[Rational])> {
        self.inequalities()
            .ok_or_else(|| Error::input("polytope has no H-representation"))
    }

    /// Dimension of the affine hull of the vertex set.
    pub fn affine_dim(&self) -> Result<usize> {
        let v = self.require_vertices()?;
        if v.is_empty() {
            return Ok(0);
        }
        let diffs: Vec<Vec<Rational>> = v[1..]
            .iter()
            .map(|p| p.iter().zip(&v[0]).map(|(a, b)| a - b).collect())
            .collect();
        if diffs.is_empty() {
            return Ok(0);
        }
        Ok(RationalMatrix::from_rows_with_cols(diffs, self.dim)?.rank())
    }

    /// Checks that both representations (when present) describe the same
    /// set: every vertex satisfies the H-rep and the H-rep has no other
    /// vertices.
    pub fn check_consistent(&self) -> Result<bool> {
        let (Some(v), Some((a, b))) = (&self.vertices, &self.inequalities) else {
            return Ok(true);
        };
        let eq = self.equalities.as_ref().map(|(c, d)| (c, d.as_slice()));
        let mut from_h = vertices_from_hrep(a, b, eq)?;
        let mut mine = v.clone();
        from_h.sort();
        mine.sort();
        Ok(from_h == mine)
    }
}

fn check_system(dim: usize, (a, b): &LinearSystem) -> Result<()> {
    if a.rows() != b.len() || (a.rows() > 0 && a.cols() != dim) {
        return Err(Error::dim("linear system does not match ambient dimension"));
    }
    Ok(())
}

/// Convex-combination coefficients `λ ≥ 0, Σλ = 1, Σ λ_i p_i = x`, if any.
pub fn convex_combination(points: &[Point], x: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let k = points.len();
    if k == 0 {
        return Ok(None);
    }
    let d = x.len();
    let mut ineq = RationalMatrix::zeros(k, k);
    for i in 0..k {
        ineq[(i, i)] = -Rational::one();
    }
    let mut eq = RationalMatrix::zeros(d + 1, k);
    for (i, p) in points.iter().enumerate() {
        if p.len() != d {
            return Err(Error::dim("point dimension mismatch"));
        }
        for j in 0..d {
            eq[(j, i)] = p[j].clone();
        }
        eq[(d, i)] = Rational::one();
    }
    let mut rhs = x.to_vec();
    rhs.push(Rational::one());
    let res = lp_solve(
        &ineq,
        &vec![Rational::zero(); k],
        &vec![Rational::zero(); k],
        Sense::Max,
        Some((&eq, &rhs)),
    )?;
    Ok(match res.status {
        LpStatus::Optimal => res.primal,
        _ => None,
    })
}

fn to_rational_vec(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// Integer coefficients with gcd 1; for equalities additionally a positive
/// leading nonzero.
fn normalize_row(coeffs: &[Rational], rhs: &Rational, sign_free: bool) -> (Vec<Rational>, Rational) {
    let mut all: Vec<Rational> = coeffs.to_vec();
    all.push(rhs.clone());
    let mut ints = dd::integer_row(&all);
    if sign_free {
        if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in ints.iter_mut() {
                    *x = -&*x;
                }
            }
        }
    }
    let r = to_rational_vec(&ints);
    (r[..coeffs.len()].to_vec(), r[coeffs.len()].clone())
}

/// Facets and affine hull of `conv(vertices)`.
pub fn hull_facets(dim: usize, vertices: &[Point]) -> Result<Polytope> {
    hull_facets_budgeted(dim, vertices, None)
}

pub fn hull_facets_budgeted(
    dim: usize,
    vertices: &[Point],
    budget: Option<&mut Budget>,
) -> Result<Polytope> {
    if vertices.is_empty() {
        return Err(Error::input("hull of an empty point set"));
    }
    if vertices.iter().any(|v| v.len() != dim) {
        return Err(Error::dim("vertex has wrong ambient dimension"));
    }
    let mut unlimited = Budget::unlimited();
    let budget = budget.unwrap_or(&mut unlimited);
    let p0 = &vertices[0];
    let diffs: Vec<Vec<Rational>> = vertices
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let dmat = RationalMatrix::from_rows_with_cols(diffs, dim)?;
    let (_, pivots) = dmat.rref();

    // equalities: c·x = c·p0 for c in the null space of the difference rows
    let mut eq_rows = Vec::new();
    let mut eq_rhs = Vec::new();
    for c in dmat.nullspace() {
        let rhs = dot(&c, p0);
        let (c, rhs) = normalize_row(&c, &rhs, true);
        eq_rows.push(c);
        eq_rhs.push(rhs);
    }
    let equalities = if eq_rows.is_empty() {
        None
    } else {
        Some((RationalMatrix::from_rows_with_cols(eq_rows, dim)?, eq_rhs))
    };

    let k = pivots.len();
    let mut facets: Vec<(Vec<Rational>, Rational)> = Vec::new();
    if k > 0 {
        // cone {(β, a) : β - a·q ≥ 0 for every projected vertex q}
        let g = RationalMatrix::from_fn(vertices.len(), k + 1, |i, j| {
            if j == 0 {
                Rational::one()
            } else {
                -vertices[i][pivots[j - 1]].clone()
            }
        });
        for ray in dd::extreme_rays(&g, budget)? {
            let beta = Rational::from_integer(ray[0].clone());
            let mut coeffs = vec![Rational::zero(); dim];
            for (t, &p) in pivots.iter().enumerate() {
                coeffs[p] = Rational::from_integer(ray[t + 1].clone());
            }
            facets.push(normalize_row(&coeffs, &beta, false));
        }
    }
    facets.sort();
    let (rows, rhs): (Vec<_>, Vec<_>) = facets.into_iter().unzip();
    let a = RationalMatrix::from_rows_with_cols(rows, dim)?;
    Ok(Polytope {
        dim,
        vertices: Some(vertices.to_vec()),
        inequalities: Some((a, rhs)),
        equalities,
    })
}

/// Vertices of the bounded set `{Ax ≤ b, Cx = d}` in lexicographic order.
pub fn vertices_from_hrep(
    a: &RationalMatrix,
    b: &[Rational],
    equalities: Option<(&RationalMatrix, &[Rational])>,
) -> Result<Vec<Point>> {
    vertices_from_hrep_budgeted(a, b, equalities, None)
}

pub fn vertices_from_hrep_budgeted(
    a: &RationalMatrix,
    b: &[Rational],
    equalities: Option<(&RationalMatrix, &[Rational])>,
    budget: Option<&mut Budget>,
) -> Result<Vec<Point>> {
    let dim = match (a.rows(), equalities) {
        (0, Some((c, _))) => c.cols(),
        _ => a.cols(),
    };
    if a.rows() != b.len() {
        return Err(Error::dim("A and b disagree"));
    }
    let mut unlimited = Budget::unlimited();
    let budget = budget.unwrap_or(&mut unlimited);

    // parametrize the affine subspace: x = x0 + N u
    let (x0, basis): (Vec<Rational>, Vec<Vec<Rational>>) = match equalities {
        Some((c, d)) if c.rows() > 0 => {
            let Some(x0) = c.solve(d) else {
                return Ok(Vec::new());
            };
            (x0, c.nullspace())
        }
        _ => (
            vec![Rational::zero(); dim],
            (0..dim)
                .map(|i| {
                    let mut e = vec![Rational::zero(); dim];
                    e[i] = Rational::one();
                    e
                })
                .collect(),
        ),
    };
    let t = basis.len();
    let ax0 = if a.rows() > 0 { a.mul_vec(&x0)? } else { Vec::new() };
    let feasible_x0 = ax0.iter().zip(b).all(|(l, r)| l <= r);
    if t == 0 {
        return Ok(if feasible_x0 { vec![x0] } else { Vec::new() });
    }
    let nmat = RationalMatrix::from_fn(dim, t, |i, j| basis[j][i].clone());
    let ap = if a.rows() > 0 { a.mul(&nmat)? } else { RationalMatrix::zeros(0, t) };
    let bp: Vec<Rational> = b.iter().zip(&ax0).map(|(x, y)| x - y).collect();

    let nonempty = || -> Result<bool> {
        let res = lp_solve(&ap, &bp, &vec![Rational::zero(); t], Sense::Max, None)?;
        Ok(res.status != LpStatus::Infeasible)
    };
    if ap.rank() < t {
        return if nonempty()? {
            Err(Error::Unbounded("inequality system has a lineality direction".into()))
        } else {
            Ok(Vec::new())
        };
    }
    // cone {(λ, u) : λ b' - A' u ≥ 0, λ ≥ 0}
    let mut g = RationalMatrix::from_fn(ap.rows() + 1, t + 1, |i, j| {
        if i == ap.rows() {
            if j == 0 {
                Rational::one()
            } else {
                Rational::zero()
            }
        } else if j == 0 {
            bp[i].clone()
        } else {
            -ap[(i, j - 1)].clone()
        }
    });
    // put λ ≥ 0 first so it is always part of the initial basis
    let last = g.rows() - 1;
    for r in (0..last).rev() {
        g.swap_rows(r, r + 1);
    }
    let rays = dd::extreme_rays(&g, budget)?;
    let mut verts = Vec::new();
    let mut has_recession = false;
    for ray in rays {
        if ray[0].is_zero() {
            has_recession = true;
            continue;
        }
        let lambda = Rational::from_integer(ray[0].clone());
        let u: Vec<Rational> = ray[1..]
            .iter()
            .map(|x| Rational::from_integer(x.clone()) / &lambda)
            .collect();
        let x: Vec<Rational> = (0..dim)
            .map(|i| &x0[i] + dot(nmat.row(i), &u))
            .collect();
        verts.push(x);
    }
    if has_recession && !verts.is_empty() {
        return Err(Error::Unbounded("system has a recession direction".into()));
    }
    verts.sort();
    verts.dedup();
    Ok(verts)
}

/// Slack matrix with row/column labels.
#[derive(Clone, Debug, PartialEq)]
pub struct SlackMatrix {
    pub matrix: RationalMatrix,
    pub row_labels: Vec<usize>,
    pub col_labels: Vec<usize>,
}

/// `S_ij = b_i - A_i p_j` for the given rows and points.
///
/// Rows may be redundant and points need not be vertices; a negative slack
/// is a validity error naming `(i, j)`.
pub fn slack_matrix(a: &RationalMatrix, b: &[Rational], points: &[Point]) -> Result<SlackMatrix> {
    if a.rows() != b.len() {
        return Err(Error::dim("A and b disagree"));
    }
    let mut m = RationalMatrix::zeros(a.rows(), points.len());
    for (j, p) in points.iter().enumerate() {
        if p.len() != a.cols() {
            return Err(Error::dim("point dimension mismatch"));
        }
        for i in 0..a.rows() {
            let s = &b[i] - dot(a.row(i), p);
            if s.is_negative() {
                return Err(Error::Validity {
                    row: i,
                    col: j,
                    detail: format!("slack {}", format_rational(&s)),
                });
            }
            m[(i, j)] = s;
        }
    }
    Ok(SlackMatrix {
        matrix: m,
        row_labels: (0..a.rows()).collect(),
        col_labels: (0..points.len()).collect(),
    })
}

/// Facet-vs-vertex slack matrix `S(P)`.
pub fn polytope_slack_matrix(p: &Polytope) -> Result<SlackMatrix> {
    let (a, b) = p.require_inequalities()?;
    slack_matrix(a, b, p.require_vertices()?)
}

/// Face of `P` cut out by the valid inequality `c·x ≤ δ`.
pub fn face_of(p: &Polytope, c: &[Rational], delta: &Rational) -> Result<Polytope> {
    if c.len() != p.dim() {
        return Err(Error::dim("inequality dimension mismatch"));
    }
    let p = p.with_vrep(None)?;
    let verts = p.require_vertices()?;
    let mut tight = Vec::new();
    for (j, v) in verts.iter().enumerate() {
        let lhs = dot(c, v);
        if &lhs > delta {
            return Err(Error::Validity {
                row: 0,
                col: j,
                detail: "inequality violated by a vertex".into(),
            });
        }
        if &lhs == delta {
            tight.push(v.clone());
        }
    }
    if let Some((a, b)) = p.inequalities() {
        // cross-check the V-rep verdict against the H-rep by LP
        let res = lp_solve(a, b, c, Sense::Max, p.equalities())?;
        if res.status == LpStatus::Optimal && res.optimum.as_ref().is_some_and(|v| v > delta) {
            return Err(Error::Validity {
                row: 0,
                col: 0,
                detail: "inequality violated over the H-representation".into(),
            });
        }
    }
    Polytope::from_vertices(p.dim(), tight)
}

/// Affine map `x ↦ M x + offset`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    pub matrix: RationalMatrix,
    #[serde(with = "rational_vec")]
    pub offset: Vec<Rational>,
}

impl LinearMap {
    pub fn linear(matrix: RationalMatrix) -> Self {
        let offset = vec![Rational::zero(); matrix.rows()];
        Self { matrix, offset }
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Point> {
        let y = self.matrix.mul_vec(x)?;
        Ok(y.iter().zip(&self.offset).map(|(a, b)| a + b).collect())
    }

    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        let matrix = self.matrix.mul(&inner.matrix)?;
        let offset = self.apply(&inner.offset)?;
        Ok(LinearMap { matrix, offset })
    }
}

/// `map(P)` as the irredundant hull of the mapped vertices.
pub fn linear_image(p: &Polytope, map: &LinearMap) -> Result<Polytope> {
    if map.source_dim() != p.dim() {
        return Err(Error::dim("map domain differs from ambient dimension"));
    }
    let p = p.with_vrep(None)?;
    let imgs = p
        .require_vertices()?
        .iter()
        .map(|v| map.apply(v))
        .collect::<Result<Vec<_>>>()?;
    Polytope::from_points(map.target_dim(), imgs)
}

/// Human-readable `a1 x1 + ... <= b`.
pub fn format_inequality(coeffs: &[Rational], rhs: &Rational, names: Option<&[String]>, op: &str) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let name = names
            .and_then(|n| n.get(i).cloned())
            .unwrap_or_else(|| format!("x{}", i + 1));
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        if mag.is_one() {
            out.push_str(&name);
        } else {
            let _ = write!(out, "{} {}", format_rational(&mag), name);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    let _ = write!(out, " {op} {}", format_rational(rhs));
    out
}

impl Polytope {
    /// One line per facet and equality.
    pub fn describe(&self, names: Option<&[String]>) -> String {
        let mut out = String::new();
        if let Some((c, d)) = self.equalities() {
            for i in 0..c.rows() {
                let _ = writeln!(out, "{}", format_inequality(c.row(i), &d[i], names, "="));
            }
        }
        if let Some((a, b)) = self.inequalities() {
            for i in 0..a.rows() {
                let _ = writeln!(out, "{}", format_inequality(a.row(i), &b[i], names, "<="));
            }
        }
        out
    }
}

mod rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        use serde::de::Error as _;
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct SystemRepr {
    #[serde(rename = "A")]
    a: RationalMatrix,
    #[serde(with = "rational_vec")]
    b: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeRepr {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inequalities: Option<SystemRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    equalities: Option<SystemRepr>,
}

impl Serialize for Polytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let sys = |x: &Option<LinearSystem>| {
            x.as_ref().map(|(a, b)| SystemRepr {
                a: a.clone(),
                b: b.clone(),
            })
        };
        PolytopeRepr {
            dim: self.dim,
            vertices: self
                .vertices
                .as_ref()
                .map(|vs| vs.iter().map(|v| v.iter().map(format_rational).collect()).collect()),
            inequalities: sys(&self.inequalities),
            equalities: sys(&self.equalities),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PolytopeRepr::deserialize(d)?;
        let vertices = repr
            .vertices
            .map(|vs| {
                vs.iter()
                    .map(|v| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()
            .map_err(D::Error::custom)?;
        let p = Polytope {
            dim: repr.dim,
            vertices,
            inequalities: repr.inequalities.map(|s| (s.a, s.b)),
            equalities: repr.equalities.map(|s| (s.a, s.b)),
        };
        if p.vertices.iter().flatten().any(|v| v.len() != p.dim) {
            return Err(D::Error::custom("vertex dimension mismatch"));
        }
        for s in p.inequalities.iter().chain(&p.equalities) {
            check_system(p.dim, s).map_err(D::Error::custom)?;
        }
        Ok(p)
    }
}
