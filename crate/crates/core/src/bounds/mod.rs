//! Lower and upper bounds on nonnegative rank: the rank bound, exact
//! minimum 1-rectangle covers of the support, and verified factorizations.

mod cover;
mod nmf;

use serde::{Deserialize, Serialize};

pub use cover::{fooling_set, maximal_rectangles, min_rectangle_cover, Rectangle, RectangleCover};
pub use nmf::{nmf_heuristic, nmf_heuristic_with, NmfOptions};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exactmath::{rat_rank, support, RationalMatrix};
use crate::factorization::NonnegFactorization;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LowerWitness {
    Rank(usize),
    Cover(RectangleCover),
    /// Pairwise incompatible 1-entries; valid when the cover search ran out
    /// of budget.
    FoolingSet(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NnegRankBounds {
    pub lower: usize,
    pub upper: usize,
    pub lower_witness: LowerWitness,
    pub upper_witness: NonnegFactorization,
    /// Best cover found (an upper bound on the cover number; exact when
    /// `cover.optimal`).
    pub cover: RectangleCover,
    pub rank: usize,
}

/// `max(rank, cover) ≤ nnegrk(M) ≤ upper` with an exactly verified upper
/// witness. Without a proven-optimal cover, the cover part of the lower
/// bound falls back to a fooling set.
pub fn nnegrank_bounds(
    m: &RationalMatrix,
    budget: &mut Budget,
    max_rectangles: usize,
    nmf: Option<&NmfOptions>,
) -> Result<NnegRankBounds> {
    if !m.is_nonnegative() {
        return Err(Error::input("matrix has a negative entry"));
    }
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::input("matrix is empty"));
    }
    let rank = rat_rank(m);
    let supp = support(m);
    let cover = min_rectangle_cover(&supp, budget, max_rectangles)?;
    let (cover_lower, cover_witness) = if cover.optimal {
        (cover.size, LowerWitness::Cover(cover.clone()))
    } else {
        let fs = fooling_set(&supp);
        (fs.len(), LowerWitness::FoolingSet(fs))
    };
    let (lower, lower_witness) = if rank >= cover_lower {
        (rank, LowerWitness::Rank(rank))
    } else {
        (cover_lower, cover_witness)
    };

    let mut upper_witness = if m.is_zero() {
        // r = 1 with a zero column is the smallest admissible inner dimension
        NonnegFactorization::new(
            RationalMatrix::zeros(m.rows(), 1),
            RationalMatrix::zeros(1, m.cols()),
        )?
    } else {
        NonnegFactorization::trivial(m)?
    };
    if let Some(opts) = nmf {
        for r in lower.max(1)..upper_witness.inner_dim() {
            if let Some(f) = nmf_heuristic_with(m, r, opts)? {
                upper_witness = f;
                break;
            }
        }
    }
    Ok(NnegRankBounds {
        lower,
        upper: upper_witness.inner_dim(),
        lower_witness,
        upper_witness,
        cover,
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::verify_nonneg_factorization;
    use crate::gadgets::matrix_m;

    #[test]
    fn bounds_for_m1_m2_and_ones() {
        let b1 = nnegrank_bounds(&matrix_m(1).unwrap(), &mut Budget::unlimited(), 10_000, None).unwrap();
        assert_eq!((b1.lower, b1.upper), (2, 2));
        let b2 = nnegrank_bounds(&matrix_m(2).unwrap(), &mut Budget::unlimited(), 10_000, None).unwrap();
        assert_eq!((b2.lower, b2.upper, b2.cover.size), (4, 4, 3));
        assert_eq!(b2.lower_witness, LowerWitness::Rank(4));
        let ones = RationalMatrix::from_i64(&[vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 1]]);
        let opts = NmfOptions::default();
        let b = nnegrank_bounds(&ones, &mut Budget::unlimited(), 10_000, Some(&opts)).unwrap();
        assert_eq!((b.lower, b.upper), (1, 1));
        assert!(verify_nonneg_factorization(&ones, &b.upper_witness).unwrap().passed());
    }

    #[test]
    fn negative_input_rejected() {
        let m = RationalMatrix::from_i64(&[vec![1, -1]]);
        assert!(nnegrank_bounds(&m, &mut Budget::unlimited(), 100, None).is_err());
    }

    #[test]
    fn exhausted_budget_falls_back_to_fooling_set() {
        let m = matrix_m(3).unwrap();
        let b = nnegrank_bounds(&m, &mut Budget::steps(1), 10_000, None).unwrap();
        assert!(!b.cover.optimal);
        assert!(b.lower <= b.upper);
        assert_eq!(b.lower, b.rank.max(fooling_set(&support(&m)).len()));
    }
}
