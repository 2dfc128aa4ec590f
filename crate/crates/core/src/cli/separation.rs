use serde::{Deserialize, Serialize};

use super::{csv_string, ExperimentConfig};
use crate::bounds::{fooling_set, min_rectangle_cover, nnegrank_bounds, NmfOptions};
use crate::error::{Error, Result};
use crate::exactmath::support;
use crate::factorization::{explicit_psd_factorization_m, verify_psd_factorization};
use crate::gadgets::matrix_m;

pub const SEPARATION_MAX_N: usize = 10;
/// Largest side length for which the rank is computed over the rationals.
const EXACT_RANK_SIDE: usize = 64;
/// Largest side length for which the NMF heuristic is tried.
const NMF_SIDE: usize = 8;
const PRIME: u64 = (1 << 61) - 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationRow {
    pub n: usize,
    pub rank: usize,
    pub rank_exact: bool,
    /// Minimum cover size when optimal, a fooling-set bound otherwise.
    pub cover_lower: usize,
    pub cover_upper: usize,
    pub cover_optimal: bool,
    pub nneg_lower: usize,
    pub nneg_upper: usize,
    pub psd_upper: usize,
    pub psd_verified: bool,
    /// `psd_upper < nneg_lower`.
    pub separated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    pub rows: Vec<SeparationRow>,
}

impl SeparationReport {
    /// Some cover search ran out of budget.
    pub fn partial(&self) -> bool {
        self.rows.iter().any(|r| !r.cover_optimal)
    }

    pub fn consistent(&self) -> bool {
        self.rows.iter().all(|r| {
            r.cover_lower <= r.cover_upper
                && r.cover_lower <= r.nneg_lower
                && r.rank <= r.nneg_lower
                && r.nneg_lower <= r.nneg_upper
                && r.separated == (r.psd_upper < r.nneg_lower)
        })
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).map_err(|e| Error::Codec(e.to_string()))?;
        }
        csv_string(w)
    }
}

pub fn separation_row(n: usize, config: &ExperimentConfig) -> Result<SeparationRow> {
    if !(1..=SEPARATION_MAX_N).contains(&n) {
        return Err(Error::input(format!("n must be in 1..={SEPARATION_MAX_N}")));
    }
    let m = matrix_m(n)?;
    let side = m.rows();
    let mut budget = config.budget();

    let psd = explicit_psd_factorization_m(n)?;
    let psd_verified = verify_psd_factorization(&m, &psd)?.passed();

    let (rank, rank_exact, cover, cover_lower, nneg_lower, nneg_upper) = if side <= EXACT_RANK_SIDE {
        let nmf = (side <= NMF_SIDE).then(|| NmfOptions {
            seed: config.seed,
            ..NmfOptions::default()
        });
        let b = nnegrank_bounds(&m, &mut budget, config.max_rectangles, nmf.as_ref())?;
        let cover_lower = if b.cover.optimal {
            b.cover.size
        } else {
            fooling_set(&support(&m)).len()
        };
        (b.rank, true, b.cover, cover_lower, b.lower, b.upper)
    } else {
        // entries are polynomials in 1, a_i and a_i a_j, so the rank is at
        // most 1 + n(n+1)/2; a modular rank reaching that value is exact
        let rank = m.rank_mod_prime(PRIME)?;
        let rank_exact = rank == 1 + n * (n + 1) / 2;
        let supp = support(&m);
        let cover = min_rectangle_cover(&supp, &mut budget, config.max_rectangles)?;
        let cover_lower = if cover.optimal { cover.size } else { fooling_set(&supp).len() };
        (rank, rank_exact, cover, cover_lower, rank.max(cover_lower), side)
    };
    Ok(SeparationRow {
        n,
        rank,
        rank_exact,
        cover_lower,
        cover_upper: cover.size,
        cover_optimal: cover.optimal,
        nneg_lower,
        nneg_upper,
        psd_upper: psd.r,
        psd_verified,
        separated: psd.r < nneg_lower,
    })
}

/// One row per `n` in the configured range, in increasing `n`.
pub fn cmd_separation(config: &ExperimentConfig) -> Result<SeparationReport> {
    config.validate()?;
    let rows = config.n_range().map(|n| separation_row(n, config)).collect::<Result<Vec<_>>>()?;
    Ok(SeparationReport { rows })
}
