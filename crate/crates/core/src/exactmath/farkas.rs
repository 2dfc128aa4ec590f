use num_traits::{One, Zero};

use super::lp::{lp_solve, LpStatus, Sense};
use super::matrix::RationalMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Checks `c·x ≤ δ` over `{Ax ≤ b, Cx = d}` by maximizing `c·x`.
///
/// Returns `Ok(false)` if the maximum exceeds `δ` or the LP is unbounded,
/// and an infeasibility error if the system is empty.
pub fn is_valid_inequality(
    a: &RationalMatrix,
    b: &[Rational],
    c: &[Rational],
    delta: &Rational,
    equalities: Option<(&RationalMatrix, &[Rational])>,
) -> Result<bool> {
    let res = lp_solve(a, b, c, Sense::Max, equalities)?;
    match res.status {
        LpStatus::Optimal => Ok(res.optimum.as_ref().is_some_and(|v| v <= delta)),
        LpStatus::Unbounded => Ok(false),
        LpStatus::Infeasible => Err(Error::Infeasible("empty inequality system".into())),
    }
}

/// Nonnegative multipliers `λ` with `λA = c` and `λb = δ`.
pub fn farkas_decompose(
    a: &RationalMatrix,
    b: &[Rational],
    c: &[Rational],
    delta: &Rational,
) -> Result<Vec<Rational>> {
    farkas_decompose_with_equalities(a, b, c, delta, None).map(|(lambda, _)| lambda)
}

/// As [`farkas_decompose`], but also allows free multipliers `κ` on an
/// equality system `Cx = d`: `λA + κC = c`, `λb + κd = δ`, `λ ≥ 0`.
///
/// Among all decompositions the one minimizing `Σλ` is returned, with the
/// simplex's deterministic tie-breaking.
pub fn farkas_decompose_with_equalities(
    a: &RationalMatrix,
    b: &[Rational],
    c: &[Rational],
    delta: &Rational,
    equalities: Option<(&RationalMatrix, &[Rational])>,
) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let dim = c.len();
    if a.rows() != b.len() || (a.rows() > 0 && a.cols() != dim) {
        return Err(Error::dim("system and inequality disagree in dimension"));
    }
    if !is_valid_inequality(a, b, c, delta, equalities)? {
        return Err(Error::Validity {
            row: 0,
            col: 0,
            detail: "inequality is not valid for the system".into(),
        });
    }
    let m = a.rows();
    let k = equalities.map_or(0, |(cm, _)| cm.rows());
    let nvars = m + k;

    // variables (λ, κ); constraints -λ ≤ 0; equalities Aᵀλ + Cᵀκ = c, bᵀλ + dᵀκ = δ
    let mut ineq = RationalMatrix::zeros(m, nvars);
    for i in 0..m {
        ineq[(i, i)] = -Rational::one();
    }
    let zero_rhs = vec![Rational::zero(); m];
    let mut eq = RationalMatrix::zeros(dim + 1, nvars);
    for j in 0..dim {
        for i in 0..m {
            eq[(j, i)] = a[(i, j)].clone();
        }
        if let Some((cm, _)) = equalities {
            for t in 0..k {
                eq[(j, m + t)] = cm[(t, j)].clone();
            }
        }
    }
    for i in 0..m {
        eq[(dim, i)] = b[i].clone();
    }
    if let Some((_, dv)) = equalities {
        for t in 0..k {
            eq[(dim, m + t)] = dv[t].clone();
        }
    }
    let mut eq_rhs = c.to_vec();
    eq_rhs.push(delta.clone());
    let mut objective = vec![Rational::one(); m];
    objective.extend((0..k).map(|_| Rational::zero()));

    let res = lp_solve(&ineq, &zero_rhs, &objective, Sense::Min, Some((&eq, &eq_rhs)))?;
    match res.status {
        LpStatus::Optimal => {
            let x = res.primal.expect("optimal primal");
            Ok((x[..m].to_vec(), x[m..].to_vec()))
        }
        _ => Err(Error::Infeasible(
            "no nonnegative combination derives the inequality".into(),
        )),
    }
}
