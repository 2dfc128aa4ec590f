//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Public entry point is [`lp_solve`], which optimizes over
//! `{x free | Ax ≤ b, Cx = d}`. Internally every problem is rewritten into
//! standard form `min cᵀz, Gz = h, z ≥ 0`; equalities become pairs of
//! opposite inequalities.

use num_traits::{One, Signed, Zero};

use super::matrix::{dot, RationalMatrix};
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub optimum: Option<Rational>,
    pub primal: Option<Vec<Rational>>,
    /// For `Infeasible`: `y ≥ 0` over the inequality rows with
    /// `yᵀA + zᵀC = 0` and `yᵀb + zᵀd < 0`.
    pub farkas_certificate: Option<Vec<Rational>>,
    /// The equality part `z` of the certificate (free sign; each entry is the
    /// merged multiplier of the two opposite inequalities).
    pub equality_certificate: Option<Vec<Rational>>,
}

enum StdOutcome {
    Optimal(Vec<Rational>),
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `m` constraint rows followed by the objective row; last column is rhs.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for v in self.t[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland's rule on columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        let m = self.basis.len();
        let rhs = self.ncols;
        loop {
            let obj = &self.t[m];
            let Some(enter) = (0..allowed).find(|&j| obj[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..m {
                let a = &self.t[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.t[i][rhs] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, enter),
                None => return false,
            }
        }
    }
}

/// `min cᵀz  s.t.  Gz = h, z ≥ 0`.
fn solve_standard(g: &[Vec<Rational>], h: &[Rational], c: &[Rational]) -> StdOutcome {
    let m = g.len();
    let n = c.len();
    // rows with nonnegative rhs, one artificial per row
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = h[i].is_negative();
        let mut row = Vec::with_capacity(n + m + 1);
        for j in 0..n {
            row.push(if flip { -g[i][j].clone() } else { g[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i { Rational::one() } else { Rational::zero() });
        }
        row.push(if flip { -h[i].clone() } else { h[i].clone() });
        t.push(row);
    }
    // phase-1 objective: minimize the sum of artificials, written in reduced form
    let mut obj = vec![Rational::zero(); n + m + 1];
    for row in &t {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[n + m] -= &row[n + m];
    }
    t.push(obj);
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        ncols: n + m,
    };
    tab.optimize(n);
    if !tab.t[m][n + m].is_zero() {
        return StdOutcome::Infeasible;
    }
    // drive artificials out of the basis; drop redundant rows
    let mut i = 0;
    while i < tab.basis.len() {
        if tab.basis[i] >= n {
            if let Some(col) = (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                tab.pivot(i, col);
                i += 1;
            } else {
                tab.t.remove(i);
                tab.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    let m = tab.basis.len();
    // phase-2 objective row in reduced form
    let mut obj = vec![Rational::zero(); n + m_art(&tab, n) + 1];
    let width = obj.len();
    obj[..n].clone_from_slice(c);
    for (r, &b) in tab.basis.iter().enumerate() {
        let cb = c[b].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..width {
            let v = &tab.t[r][j] * &cb;
            obj[j] -= v;
        }
    }
    tab.t[m] = obj;
    if !tab.optimize(n) {
        return StdOutcome::Unbounded;
    }
    let rhs = tab.ncols;
    let mut z = vec![Rational::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        z[b] = tab.t[r][rhs].clone();
    }
    StdOutcome::Optimal(z)
}

fn m_art(tab: &Tableau, n: usize) -> usize {
    tab.ncols - n
}

/// Feasibility of `{y ≥ 0 | Gᵀ y = 0, hᵀ y = -1}`; returns `y`.
fn farkas_alternative(g: &[Vec<Rational>], h: &[Rational], nvars: usize) -> Option<Vec<Rational>> {
    let m = g.len();
    let mut rows: Vec<Vec<Rational>> = (0..nvars)
        .map(|j| (0..m).map(|i| g[i][j].clone()).collect())
        .collect();
    rows.push(h.to_vec());
    let mut rhs = vec![Rational::zero(); nvars];
    rhs.push(-Rational::one());
    match solve_standard(&rows, &rhs, &vec![Rational::zero(); m]) {
        StdOutcome::Optimal(y) => Some(y),
        _ => None,
    }
}

/// Optimizes `objective · x` over `{x | A x ≤ b, C x = d}` with `x` free.
pub fn lp_solve(
    a: &RationalMatrix,
    b: &[Rational],
    objective: &[Rational],
    sense: Sense,
    equalities: Option<(&RationalMatrix, &[Rational])>,
) -> Result<LpResult> {
    let d = objective.len();
    if a.cols() != d && a.rows() > 0 {
        return Err(Error::dim(format!("A has {} columns, objective {}", a.cols(), d)));
    }
    if a.rows() != b.len() {
        return Err(Error::dim(format!("A has {} rows, b has {}", a.rows(), b.len())));
    }
    let (eq_rows, eq_rhs): (Vec<Vec<Rational>>, Vec<Rational>) = match equalities {
        Some((c, dv)) => {
            if c.rows() != dv.len() || (c.rows() > 0 && c.cols() != d) {
                return Err(Error::dim("equality system shape mismatch"));
            }
            (c.row_vecs(), dv.to_vec())
        }
        None => (Vec::new(), Vec::new()),
    };
    let m_ineq = a.rows();
    let m_eq = eq_rows.len();

    // inequality list: A rows, then C rows, then -C rows
    let mut rows: Vec<Vec<Rational>> = a.row_vecs();
    let mut rhs: Vec<Rational> = b.to_vec();
    for (r, v) in eq_rows.iter().zip(&eq_rhs) {
        rows.push(r.clone());
        rhs.push(v.clone());
    }
    for (r, v) in eq_rows.iter().zip(&eq_rhs) {
        rows.push(r.iter().map(|x| -x.clone()).collect());
        rhs.push(-v.clone());
    }
    let total = rows.len();

    // standard form over z = (x⁺, x⁻, s)
    let nvars = 2 * d + total;
    let g: Vec<Vec<Rational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = Vec::with_capacity(nvars);
            row.extend(r.iter().cloned());
            row.extend(r.iter().map(|x| -x.clone()));
            row.extend((0..total).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let sign = match sense {
        Sense::Max => -Rational::one(),
        Sense::Min => Rational::one(),
    };
    let mut c = Vec::with_capacity(nvars);
    c.extend(objective.iter().map(|x| x * &sign));
    c.extend(objective.iter().map(|x| -(x * &sign)));
    c.extend((0..total).map(|_| Rational::zero()));

    match solve_standard(&g, &rhs, &c) {
        StdOutcome::Optimal(z) => {
            let x: Vec<Rational> = (0..d).map(|j| &z[j] - &z[d + j]).collect();
            let value = dot(objective, &x);
            Ok(LpResult {
                status: LpStatus::Optimal,
                optimum: Some(value),
                primal: Some(x),
                farkas_certificate: None,
                equality_certificate: None,
            })
        }
        StdOutcome::Unbounded => Ok(LpResult {
            status: LpStatus::Unbounded,
            optimum: None,
            primal: None,
            farkas_certificate: None,
            equality_certificate: None,
        }),
        StdOutcome::Infeasible => {
            let y = farkas_alternative(&rows, &rhs, d).ok_or_else(|| {
                Error::Numeric("infeasible system without a Farkas certificate".into())
            })?;
            let ineq = y[..m_ineq].to_vec();
            let eq: Vec<Rational> = (0..m_eq)
                .map(|k| &y[m_ineq + k] - &y[m_ineq + m_eq + k])
                .collect();
            Ok(LpResult {
                status: LpStatus::Infeasible,
                optimum: None,
                primal: None,
                farkas_certificate: Some(ineq),
                equality_certificate: Some(eq),
            })
        }
    }
}
