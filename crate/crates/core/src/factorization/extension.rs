use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{verify_nonneg_factorization, verify_psd_factorization, NonnegFactorization, PsdFactorization};
use crate::error::{Error, Result};
use crate::exactmath::{
    dot, farkas_decompose_with_equalities, ldl_psd, lp_solve, rat, LpStatus, Rational,
    RationalMatrix, Sense,
};
use crate::polytope::{convex_combination, slack_matrix, Point, Polytope};

/// The cone `C` of an extension `{(x, y) | Ex + Fy = g, y ∈ C}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", content = "dim")]
pub enum ConeId {
    NonnegOrthant(usize),
    /// `S^r_+` flattened to `r(r+1)/2` coordinates (see [`flatten_sym`]).
    PsdCone(usize),
}

impl ConeId {
    /// Number of `y` coordinates.
    pub fn coords(&self) -> usize {
        match *self {
            ConeId::NonnegOrthant(k) => k,
            ConeId::PsdCone(r) => r * (r + 1) / 2,
        }
    }

    /// Exact membership.
    pub fn contains(&self, y: &[Rational]) -> bool {
        if y.len() != self.coords() {
            return false;
        }
        match *self {
            ConeId::NonnegOrthant(_) => y.iter().all(|v| !v.is_negative()),
            ConeId::PsdCone(r) => ldl_psd(&unflatten_sym(y, r)).is_some(),
        }
    }

    /// Both cones are self-dual.
    pub fn dual(&self) -> ConeId {
        *self
    }
}

/// Upper triangle `(k ≤ l)` of a symmetric matrix, row by row.
pub fn flatten_sym(m: &RationalMatrix) -> Vec<Rational> {
    let r = m.rows();
    (0..r)
        .flat_map(|k| (k..r).map(move |l| (k, l)))
        .map(|(k, l)| m[(k, l)].clone())
        .collect()
}

pub fn unflatten_sym(y: &[Rational], r: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(r, r);
    let mut it = y.iter();
    for k in 0..r {
        for l in k..r {
            let v = it.next().cloned().unwrap_or_else(Rational::zero);
            m[(k, l)] = v.clone();
            m[(l, k)] = v;
        }
    }
    m
}

/// Coefficients `z` with `z · flatten_sym(Y) = ⟨T, Y⟩` (off-diagonal weight 2).
pub fn sym_pairing_row(t: &RationalMatrix) -> Vec<Rational> {
    let r = t.rows();
    let two = rat(2, 1);
    (0..r)
        .flat_map(|k| (k..r).map(move |l| (k, l)))
        .map(|(k, l)| if k == l { t[(k, k)].clone() } else { &t[(k, l)] * &two })
        .collect()
}

/// `{(x, y) | E x + F y = g, y ∈ cone}` with optional lifts `(vertex id, y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionSystem {
    #[serde(rename = "E")]
    pub e: RationalMatrix,
    #[serde(rename = "F")]
    pub f: RationalMatrix,
    #[serde(with = "rational_strings")]
    pub g: Vec<Rational>,
    pub cone: ConeId,
    #[serde(with = "lift_strings")]
    pub lifted_points: Vec<(usize, Vec<Rational>)>,
}

impl ExtensionSystem {
    pub fn new(
        e: RationalMatrix,
        f: RationalMatrix,
        g: Vec<Rational>,
        cone: ConeId,
    ) -> Result<Self> {
        if e.rows() != f.rows() || e.rows() != g.len() {
            return Err(Error::dim("E, F and g must have the same number of rows"));
        }
        if f.cols() != cone.coords() {
            return Err(Error::dim("F does not match the cone dimension"));
        }
        Ok(Self {
            e,
            f,
            g,
            cone,
            lifted_points: Vec::new(),
        })
    }

    /// Whether `(x, y)` lies in the extension (exact).
    pub fn contains(&self, x: &[Rational], y: &[Rational]) -> Result<bool> {
        if x.len() != self.e.cols() || y.len() != self.f.cols() {
            return Err(Error::dim("point does not match the extension"));
        }
        let ex = self.e.mul_vec(x)?;
        let fy = self.f.mul_vec(y)?;
        let eq = (0..self.g.len()).all(|i| &ex[i] + &fy[i] == self.g[i]);
        Ok(eq && self.cone.contains(y))
    }

    /// Checks every stored lift against the given vertex list.
    pub fn check_lifts(&self, vertices: &[Point]) -> Result<()> {
        for (j, y) in &self.lifted_points {
            let x = vertices
                .get(*j)
                .ok_or_else(|| Error::input(format!("lift refers to unknown vertex {j}")))?;
            if !self.contains(x, y)? {
                return Err(Error::NotAnExtension(format!("lift of vertex {j} is not in Q")));
            }
        }
        Ok(())
    }

    /// Some `y ∈ cone` with `(x, y)` in the extension (orthant only; the PSD
    /// case would need an SDP solver).
    pub fn find_lift(&self, x: &[Rational]) -> Result<Option<Vec<Rational>>> {
        let ConeId::NonnegOrthant(k) = self.cone else {
            return Err(Error::input("lifting by LP needs the nonnegative orthant"));
        };
        let ex = self.e.mul_vec(x)?;
        let rhs: Vec<Rational> = self.g.iter().zip(&ex).map(|(a, b)| a - b).collect();
        let neg_id = RationalMatrix::identity(k).scale(&-Rational::one());
        let res = lp_solve(
            &neg_id,
            &vec![Rational::zero(); k],
            &vec![Rational::zero(); k],
            Sense::Min,
            Some((&self.f, &rhs)),
        )?;
        Ok(match res.status {
            LpStatus::Optimal => res.primal,
            _ => None,
        })
    }
}

fn require_reps(p: &Polytope) -> Result<(&RationalMatrix, &[Rational], &[Point])> {
    let (a, b) = p.require_inequalities()?;
    Ok((a, b, p.require_vertices()?))
}

/// `E = [A; C]`, `F = [T; 0]`, `g = [b; d]`: `P`'s inequalities and
/// (if present) its affine-hull equalities.
fn stack_with_equalities(
    p: &Polytope,
    a: &RationalMatrix,
    b: &[Rational],
    f: &RationalMatrix,
) -> Result<(RationalMatrix, RationalMatrix, Vec<Rational>)> {
    let mut e = a.clone();
    let mut ff = f.clone();
    let mut g = b.to_vec();
    if let Some((c, d)) = p.equalities() {
        if c.rows() > 0 {
            e = e.vstack(c)?;
            ff = ff.vstack(&RationalMatrix::zeros(c.rows(), f.cols()))?;
            g.extend(d.iter().cloned());
        }
    }
    Ok((e, ff, g))
}

/// `Q = {(x, y) | A x + T y = b, y ≥ 0}` from `S = T U`; zero columns of `T`
/// are dropped first. Each vertex `v_j` lifts to `U^j`.
pub fn extension_from_nonneg_factorization(
    p: &Polytope,
    f: &NonnegFactorization,
) -> Result<ExtensionSystem> {
    let (a, b, verts) = require_reps(p)?;
    let s = slack_matrix(a, b, verts)?;
    let verdict = verify_nonneg_factorization(&s.matrix, f)?;
    if !verdict.passed() {
        return Err(Error::input(format!("factorization does not match the slack matrix: {verdict}")));
    }
    let keep: Vec<usize> = (0..f.t.cols())
        .filter(|&k| (0..f.t.rows()).any(|i| !f.t[(i, k)].is_zero()))
        .collect();
    let t = f.t.select_cols(&keep);
    let u = f.u.select_rows(&keep);
    let (e, ff, g) = stack_with_equalities(p, a, b, &t)?;
    let mut ext = ExtensionSystem::new(e, ff, g, ConeId::NonnegOrthant(keep.len()))?;
    ext.lifted_points = (0..verts.len()).map(|j| (j, u.column(j))).collect();
    ext.check_lifts(verts)?;
    Ok(ext)
}

/// Recovers `S = T U` from an orthant extension of `P`.
///
/// `U^j` is a lift of `v_j` (supplied, stored in `ext`, or found by LP).
/// Row `T_i = Fᵀμ ≥ 0` comes from multipliers with `μᵀE - κᵀC = A_i`,
/// `μᵀg - κᵀd = b_i` (`C x = d` the equalities of `P`), so
/// `b_i - A_i v_j = μᵀ F U^j`.
pub fn factorization_from_extension(
    ext: &ExtensionSystem,
    p: &Polytope,
    lifts: Option<&[Vec<Rational>]>,
) -> Result<NonnegFactorization> {
    let ConeId::NonnegOrthant(k) = ext.cone else {
        return Err(Error::input("expected a nonnegative-orthant extension"));
    };
    let (a, b, verts) = require_reps(p)?;
    if ext.e.cols() != p.dim() {
        return Err(Error::dim("extension and polytope differ in dimension"));
    }
    let mut w = Vec::with_capacity(verts.len());
    for (j, v) in verts.iter().enumerate() {
        let given = lifts
            .and_then(|l| l.get(j).cloned())
            .or_else(|| ext.lifted_points.iter().find(|(id, _)| *id == j).map(|(_, y)| y.clone()));
        let y = match given {
            Some(y) if ext.contains(v, &y)? => y,
            Some(_) => return Err(Error::NotAnExtension(format!("supplied lift of vertex {j} is not in Q"))),
            None => ext
                .find_lift(v)?
                .ok_or_else(|| Error::NotAnExtension(format!("vertex {j} has no lift")))?,
        };
        w.push(y);
    }

    let prow = ext.e.rows();
    let (c, d) = match p.equalities() {
        Some((c, d)) => (c.clone(), d.to_vec()),
        None => (RationalMatrix::zeros(0, p.dim()), Vec::new()),
    };
    let q = c.rows();
    let nv = prow + q;
    // variables (μ, κ): -Fᵀμ ≤ 0; Eᵀμ - Cᵀκ = A_iᵀ; gᵀμ - dᵀκ = b_i
    let ineq = RationalMatrix::from_fn(k, nv, |r, s| {
        if s < prow {
            -ext.f[(s, r)].clone()
        } else {
            Rational::zero()
        }
    });
    let eq = RationalMatrix::from_fn(p.dim() + 1, nv, |r, s| {
        match (r < p.dim(), s < prow) {
            (true, true) => ext.e[(s, r)].clone(),
            (true, false) => -c[(s - prow, r)].clone(),
            (false, true) => ext.g[s].clone(),
            (false, false) => -d[s - prow].clone(),
        }
    });
    let zeros_k = vec![Rational::zero(); k];
    let zeros_obj = vec![Rational::zero(); nv];
    let mut t_rows = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let mut rhs = a.row(i).to_vec();
        rhs.push(b[i].clone());
        let res = lp_solve(&ineq, &zeros_k, &zeros_obj, Sense::Min, Some((&eq, &rhs)))?;
        let Some(sol) = res.primal.filter(|_| res.status == LpStatus::Optimal) else {
            return Err(Error::NotAnExtension(format!("no multipliers derive inequality {i}")));
        };
        let mu = &sol[..prow];
        t_rows.push((0..k).map(|r| dot(mu, &ext.f.column(r))).collect::<Vec<_>>());
    }
    let t = RationalMatrix::from_rows_with_cols(t_rows, k)?;
    let u = RationalMatrix::from_fn(k, verts.len(), |r, j| w[j][r].clone());
    let f = NonnegFactorization::new(t, u)?;
    let s = slack_matrix(a, b, verts)?;
    let verdict = verify_nonneg_factorization(&s.matrix, &f)?;
    if !verdict.passed() {
        return Err(Error::NotAnExtension(format!("recovered factorization fails: {verdict}")));
    }
    Ok(f)
}

/// Extends a factorization of the facet rows of `P` (against its vertices)
/// to arbitrary valid rows and points of `P`.
///
/// Row factors are `μᵀ T` with Farkas multipliers `μ` over the facets;
/// column factors are `Σ λ_ℓ U^ℓ` with convex-combination weights `λ`.
pub fn extend_to_redundant_rows(
    f: &NonnegFactorization,
    p: &Polytope,
    rows: (&RationalMatrix, &[Rational]),
    points: &[Point],
) -> Result<NonnegFactorization> {
    let (a, b, verts) = require_reps(p)?;
    let s = slack_matrix(a, b, verts)?;
    if !verify_nonneg_factorization(&s.matrix, f)?.passed() {
        return Err(Error::input("facet factorization does not verify"));
    }
    let (ra, rb) = rows;
    if ra.rows() != rb.len() || (ra.rows() > 0 && ra.cols() != p.dim()) {
        return Err(Error::dim("row system does not match the polytope"));
    }
    let r = f.inner_dim();
    let mut t_rows = Vec::with_capacity(ra.rows());
    for i in 0..ra.rows() {
        let (mu, _) = farkas_decompose_with_equalities(a, b, ra.row(i), &rb[i], p.equalities())
            .map_err(|e| match e {
                Error::Validity { .. } | Error::Infeasible(_) => {
                    Error::input(format!("row {i} is not valid for the polytope"))
                }
                other => other,
            })?;
        t_rows.push((0..r).map(|k| dot(&mu, &f.t.column(k))).collect::<Vec<_>>());
    }
    let mut u_cols = Vec::with_capacity(points.len());
    for (j, x) in points.iter().enumerate() {
        let lam = convex_combination(verts, x)?
            .ok_or_else(|| Error::input(format!("point {j} is not in the polytope")))?;
        u_cols.push((0..r).map(|k| dot(&lam, f.u.row(k))).collect::<Vec<_>>());
    }
    let t = RationalMatrix::from_rows_with_cols(t_rows, r)?;
    let u = RationalMatrix::from_fn(r, points.len(), |k, j| u_cols[j][k].clone());
    let out = NonnegFactorization::new(t, u)?;
    let full = slack_matrix(ra, rb, points)?;
    let verdict = verify_nonneg_factorization(&full.matrix, &out)?;
    if !verdict.passed() {
        return Err(Error::input(format!("extended factorization fails: {verdict}")));
    }
    Ok(out)
}

/// Semidefinite extension `{A x + (⟨T_i, Y⟩)_i = b, Y ∈ S^r_+}`; vertex `v_j`
/// lifts to `U^j`.
pub fn psd_extension_from_factorization(p: &Polytope, f: &PsdFactorization) -> Result<ExtensionSystem> {
    let (a, b, verts) = require_reps(p)?;
    let s = slack_matrix(a, b, verts)?;
    let verdict = verify_psd_factorization(&s.matrix, f)?;
    if !verdict.passed() {
        return Err(Error::input(format!("PSD factorization does not match the slack matrix: {verdict}")));
    }
    let rows: Vec<Vec<Rational>> = f.ts.iter().map(sym_pairing_row).collect();
    let coords = f.r * (f.r + 1) / 2;
    let fm = RationalMatrix::from_rows_with_cols(rows, coords)?;
    let (e, ff, g) = stack_with_equalities(p, a, b, &fm)?;
    let mut ext = ExtensionSystem::new(e, ff, g, ConeId::PsdCone(f.r))?;
    ext.lifted_points = f.us.iter().enumerate().map(|(j, u)| (j, flatten_sym(u))).collect();
    ext.check_lifts(verts)?;
    Ok(ext)
}

mod rational_strings {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exactmath::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        use serde::de::Error as _;
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

mod lift_strings {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exactmath::{format_rational, parse_rational, Rational};

    #[derive(Serialize, Deserialize)]
    struct Lift {
        vertex: usize,
        y: Vec<String>,
    }

    pub fn serialize<S: Serializer>(v: &[(usize, Vec<Rational>)], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|(j, y)| Lift {
                vertex: *j,
                y: y.iter().map(format_rational).collect(),
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(usize, Vec<Rational>)>, D::Error> {
        use serde::de::Error as _;
        Vec::<Lift>::deserialize(d)?
            .into_iter()
            .map(|l| {
                let y = l
                    .y
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<crate::error::Result<Vec<_>>>()
                    .map_err(D::Error::custom)?;
                Ok((l.vertex, y))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::explicit_psd_factorization_m;
    use crate::gadgets::{cor_inequalities, Graph};
    use crate::polytope::{gen_cor, gen_cut, gen_stab, polytope_slack_matrix};

    fn r(n: i64) -> Rational {
        rat(n, 1)
    }

    fn trivial_roundtrip(p: &Polytope) -> (NonnegFactorization, NonnegFactorization) {
        let s = polytope_slack_matrix(p).unwrap();
        let f = NonnegFactorization::trivial(&s.matrix).unwrap();
        let ext = extension_from_nonneg_factorization(p, &f).unwrap();
        ext.check_lifts(p.vertices().unwrap()).unwrap();
        let back = factorization_from_extension(&ext, p, None).unwrap();
        assert!(verify_nonneg_factorization(&s.matrix, &back).unwrap().passed());
        assert!(back.inner_dim() <= f.inner_dim());
        (f, back)
    }

    #[test]
    fn segment_extension() {
        let p = Polytope::from_vertices(1, vec![vec![r(0)], vec![r(1)]])
            .unwrap()
            .with_hrep(None)
            .unwrap();
        // facets sorted: -x <= 0, x <= 1
        let s = polytope_slack_matrix(&p).unwrap();
        assert_eq!(s.matrix, RationalMatrix::from_i64(&[vec![0, 1], vec![1, 0]]));
        let f = NonnegFactorization::new(RationalMatrix::identity(2), s.matrix.clone()).unwrap();
        let ext = extension_from_nonneg_factorization(&p, &f).unwrap();
        assert_eq!(ext.f, RationalMatrix::identity(2));
        assert_eq!(ext.lifted_points[0], (0, vec![r(0), r(1)]));
        let back = factorization_from_extension(&ext, &p, None).unwrap();
        assert_eq!(back.t, RationalMatrix::identity(2));
        assert_eq!(back.u, s.matrix);
    }

    #[test]
    fn roundtrips_on_small_families() {
        for p in [
            gen_cut(3).unwrap(),
            gen_cor(2).unwrap(),
            gen_stab(&Graph::complete(3)).unwrap(),
            gen_stab(&Graph::cycle(5)).unwrap(),
        ] {
            let p = p.with_hrep(None).unwrap();
            trivial_roundtrip(&p);
        }
    }

    #[test]
    fn lifts_found_by_lp() {
        let p = gen_cut(3).unwrap().with_hrep(None).unwrap();
        let s = polytope_slack_matrix(&p).unwrap();
        let f = NonnegFactorization::trivial(&s.matrix).unwrap();
        let mut ext = extension_from_nonneg_factorization(&p, &f).unwrap();
        ext.lifted_points.clear();
        let back = factorization_from_extension(&ext, &p, None).unwrap();
        assert!(verify_nonneg_factorization(&s.matrix, &back).unwrap().passed());
    }

    #[test]
    fn duplicated_extension_row_keeps_rank() {
        let p = gen_cut(3).unwrap().with_hrep(None).unwrap();
        let s = polytope_slack_matrix(&p).unwrap();
        let f = NonnegFactorization::trivial(&s.matrix).unwrap();
        let ext = extension_from_nonneg_factorization(&p, &f).unwrap();
        let dup = ExtensionSystem {
            e: ext.e.vstack(&ext.e.select_rows(&[0])).unwrap(),
            f: ext.f.vstack(&ext.f.select_rows(&[0])).unwrap(),
            g: ext.g.iter().chain(std::iter::once(&ext.g[0])).cloned().collect(),
            ..ext.clone()
        };
        let back = factorization_from_extension(&dup, &p, None).unwrap();
        assert_eq!(back.inner_dim(), f.inner_dim());
    }

    #[test]
    fn not_an_extension() {
        let p = gen_cut(3).unwrap().with_hrep(None).unwrap();
        // y ≥ 0 with x = y forces nothing about x12 + x13 + x23 <= 2
        let e = RationalMatrix::identity(3);
        let f = RationalMatrix::identity(3).scale(&r(-1));
        let ext = ExtensionSystem::new(e, f, vec![r(0); 3], ConeId::NonnegOrthant(3)).unwrap();
        assert!(matches!(
            factorization_from_extension(&ext, &p, None),
            Err(Error::NotAnExtension(_))
        ));
        // a system that excludes a vertex
        let e = RationalMatrix::from_i64(&[vec![1, 0, 0]]);
        let f = RationalMatrix::from_i64(&[vec![1]]);
        let ext = ExtensionSystem::new(e, f, vec![r(0)], ConeId::NonnegOrthant(1)).unwrap();
        assert!(matches!(
            factorization_from_extension(&ext, &p, None),
            Err(Error::NotAnExtension(_))
        ));
    }

    #[test]
    fn redundant_rows_and_points() {
        let p = gen_cut(3).unwrap().with_hrep(None).unwrap();
        let (a, b) = p.inequalities().unwrap();
        let s = polytope_slack_matrix(&p).unwrap();
        let f = NonnegFactorization::trivial(&s.matrix).unwrap();
        // facet 3 is x12 + x13 + x23 <= 2 in sorted order
        let k = (0..a.rows()).find(|&i| b[i] == r(2)).unwrap();
        let extra = RationalMatrix::from_i64(&[vec![1, 1, 1], vec![0, 0, 0]]);
        let rows = a.vstack(&extra).unwrap().vstack(&a.select_rows(&[k])).unwrap();
        let mut rhs = b.to_vec();
        rhs.extend([r(3), r(1), b[k].clone()]);
        let mut pts = p.vertices().unwrap().to_vec();
        pts.push(vec![rat(1, 2); 3]);
        pts.push(vec![rat(1, 4), rat(1, 4), rat(0, 1)]);
        let g = extend_to_redundant_rows(&f, &p, (&rows, &rhs), &pts).unwrap();
        assert_eq!(g.inner_dim(), f.inner_dim());
        assert_eq!(g.t.row(a.rows() + 2), f.t.row(k));
        // the centroid column is the average of the vertex columns
        let avg: Vec<Rational> = (0..4)
            .map(|kk| f.u.row(kk).iter().fold(r(0), |s, x| s + x) / r(4))
            .collect();
        assert_eq!(g.u.column(4), avg);
        // invalid row
        let bad = RationalMatrix::from_i64(&[vec![1, 1, 1]]);
        assert!(extend_to_redundant_rows(&f, &p, (&bad, &[r(1)]), &pts).is_err());
    }

    #[test]
    fn psd_extension_of_cor2() {
        let cor = gen_cor(2).unwrap();
        let (a, b) = cor_inequalities(2);
        let p = Polytope::from_parts(3, cor.vertices().unwrap().to_vec(), (a, b), None).unwrap();
        let f = explicit_psd_factorization_m(2).unwrap();
        let ext = psd_extension_from_factorization(&p, &f).unwrap();
        assert_eq!(ext.cone, ConeId::PsdCone(3));
        assert_eq!(ext.lifted_points.len(), 4);
        ext.check_lifts(p.vertices().unwrap()).unwrap();
    }

    #[test]
    fn flatten_pairing() {
        let t = RationalMatrix::from_i64(&[vec![1, 2], vec![2, 5]]);
        let u = RationalMatrix::from_i64(&[vec![3, -1], vec![-1, 4]]);
        assert_eq!(dot(&sym_pairing_row(&t), &flatten_sym(&u)), t.frobenius(&u).unwrap());
        assert_eq!(unflatten_sym(&flatten_sym(&u), 2), u);
        assert!(ConeId::PsdCone(2).contains(&flatten_sym(&u)));
        assert!(!ConeId::PsdCone(2).contains(&[r(1), r(2), r(1)]));
    }

    #[test]
    fn codec() {
        let p = gen_cut(3).unwrap().with_hrep(None).unwrap();
        let s = polytope_slack_matrix(&p).unwrap();
        let ext = extension_from_nonneg_factorization(&p, &NonnegFactorization::trivial(&s.matrix).unwrap()).unwrap();
        let js = serde_json::to_string(&ext).unwrap();
        assert!(js.contains(r#""cone":{"tag":"NonnegOrthant","dim":4}"#));
        assert_eq!(serde_json::from_str::<ExtensionSystem>(&js).unwrap(), ext);
    }
}
