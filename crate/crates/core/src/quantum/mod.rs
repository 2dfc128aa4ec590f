//! One-way quantum protocols that compute a nonnegative matrix in
//! expectation: Alice sends a state `ρ_i`, Bob measures with a POVM
//! `{E^j_θ}` and outputs `θ`.
//!
//! Everything here is floating point with explicit tolerances; exact claims
//! live in [`crate::factorization`].

mod protocol;
mod state;
mod svd;

pub use protocol::{
    protocol_from_entrywise_sqrt, protocol_from_psd_factorization, protocol_to_psd_factorization,
    sampling_report, FloatPsdFactorization, OneWayProtocol, SampleRow,
};
pub use state::{DensityMatrix, Povm, PovmElement, TOL};
pub use svd::{svd_small, SvdResult};

pub type Mat = Vec<Vec<f64>>;

pub(crate) fn eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| a[i][j]);
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

pub(crate) fn trace_product(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x * y).sum::<f64>())
        .sum()
}

pub(crate) fn max_abs(a: &[Vec<f64>]) -> f64 {
    a.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}
