use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::state::{DensityMatrix, Povm, PovmElement, TOL};
use super::{eigenvalues, svd_small, trace_product, Mat};
use crate::error::{Error, Result};
use crate::exactmath::{from_f64_bounded, to_f64, Rational, RationalMatrix};
use crate::factorization::{verify_psd_factorization, PsdFactorization};

/// On input `i` Alice sends `states[i]`; on input `j` Bob measures with
/// `measurements[j]` and outputs the label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProtocol")]
pub struct OneWayProtocol {
    message_dim: usize,
    states: Vec<DensityMatrix>,
    measurements: Vec<Povm>,
}

#[derive(Deserialize)]
struct RawProtocol {
    message_dim: usize,
    states: Vec<DensityMatrix>,
    measurements: Vec<Povm>,
}

impl TryFrom<RawProtocol> for OneWayProtocol {
    type Error = Error;
    fn try_from(raw: RawProtocol) -> Result<Self> {
        Self::new(raw.message_dim, raw.states, raw.measurements)
    }
}

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

fn outer(v: &[f64]) -> Mat {
    v.iter().map(|a| v.iter().map(|b| a * b).collect()).collect()
}

fn pad(a: &[Vec<f64>], corner: f64) -> Mat {
    let n = a.len();
    let mut out: Mat = a
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.push(0.0);
            r
        })
        .collect();
    let mut last = vec![0.0; n + 1];
    last[n] = corner;
    out.push(last);
    out
}

fn sub(a: &[Vec<f64>], b: &[Vec<f64>]) -> Mat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
}

impl OneWayProtocol {
    pub fn new(message_dim: usize, states: Vec<DensityMatrix>, measurements: Vec<Povm>) -> Result<Self> {
        if states.iter().any(|s| s.dim() != message_dim) || measurements.iter().any(|p| p.dim() != message_dim) {
            return Err(Error::dim(format!("all states and measurements must have dimension {message_dim}")));
        }
        Ok(Self {
            message_dim,
            states,
            measurements,
        })
    }

    pub fn message_dim(&self) -> usize {
        self.message_dim
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn measurements(&self) -> &[Povm] {
        &self.measurements
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.states.len(), self.measurements.len())
    }

    fn check_index(&self, i: usize, j: usize) -> Result<()> {
        let (m, n) = self.shape();
        if i >= m || j >= n {
            return Err(Error::input(format!("input pair ({i}, {j}) outside {m}×{n}")));
        }
        Ok(())
    }

    /// `Σ_θ θ tr(E^j_θ ρ_i)`.
    pub fn expected_output(&self, i: usize, j: usize) -> Result<f64> {
        self.check_index(i, j)?;
        let rho = self.states[i].entries();
        Ok(self.measurements[j]
            .elements()
            .iter()
            .map(|e| e.label * trace_product(&e.operator, rho))
            .sum())
    }

    pub fn expected_matrix(&self) -> Mat {
        let (m, n) = self.shape();
        (0..m)
            .map(|i| (0..n).map(|j| self.expected_output(i, j).expect("in range")).collect())
            .collect()
    }

    /// Born probabilities `tr(E_θ ρ_i)`, clipped at zero and renormalized.
    pub fn outcome_distribution(&self, i: usize, j: usize) -> Result<Vec<(f64, f64)>> {
        self.check_index(i, j)?;
        let rho = self.states[i].entries();
        let raw: Vec<(f64, f64)> = self.measurements[j]
            .elements()
            .iter()
            .map(|e| (e.label, trace_product(&e.operator, rho)))
            .collect();
        if raw.iter().any(|&(_, p)| p < -TOL) {
            return Err(Error::Numeric(format!("negative outcome probability at ({i}, {j})")));
        }
        let total: f64 = raw.iter().map(|&(_, p)| p.max(0.0)).sum();
        if (total - 1.0).abs() > TOL {
            return Err(Error::Numeric(format!("outcome probabilities sum to {total} at ({i}, {j})")));
        }
        Ok(raw.into_iter().map(|(l, p)| (l, (p.max(0.0) / total).min(1.0))).collect())
    }

    /// One measurement outcome, deterministic in `seed`.
    pub fn sample_output(&self, i: usize, j: usize, seed: u64) -> Result<f64> {
        let dist = self.outcome_distribution(i, j)?;
        Ok(draw(&dist, &mut ChaCha8Rng::seed_from_u64(seed)))
    }

    /// Empirical mean and standard error over `samples` draws.
    pub fn sample_mean(&self, i: usize, j: usize, samples: usize, seed: u64) -> Result<(f64, f64)> {
        if samples == 0 {
            return Err(Error::input("sample count must be positive"));
        }
        let dist = self.outcome_distribution(i, j)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..samples {
            let x = draw(&dist, &mut rng);
            sum += x;
            sq += x * x;
        }
        let k = samples as f64;
        let mean = sum / k;
        let var = if samples > 1 { ((sq - k * mean * mean) / (k - 1.0)).max(0.0) } else { 0.0 };
        Ok((mean, (var / k).sqrt()))
    }
}

fn draw(dist: &[(f64, f64)], rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for &(label, p) in dist {
        acc += p;
        if u < acc {
            return label;
        }
    }
    // rounding left a sliver above the cumulative total
    dist.iter().rev().find(|&&(_, p)| p > 0.0).map_or(dist[0].0, |&(l, _)| l)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub i: usize,
    pub j: usize,
    pub mean: f64,
    pub stderr: f64,
    pub expected: f64,
}

/// Monte Carlo estimate for every input pair; pair `(i, j)` uses its own
/// seed derived from `seed`.
pub fn sampling_report(p: &OneWayProtocol, samples: usize, seed: u64) -> Result<Vec<SampleRow>> {
    let (m, n) = p.shape();
    let mut rows = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            let pair_seed = seed ^ ((i * n + j) as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let (mean, stderr) = p.sample_mean(i, j, samples, pair_seed)?;
            rows.push(SampleRow {
                i,
                j,
                mean,
                stderr,
                expected: p.expected_output(i, j)?,
            });
        }
    }
    Ok(rows)
}

/// Floating-point PSD factorization `M_ij = tr(T_i U^j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatPsdFactorization {
    pub r: usize,
    #[serde(rename = "T")]
    pub ts: Vec<Mat>,
    #[serde(rename = "U")]
    pub us: Vec<Mat>,
}

impl FloatPsdFactorization {
    pub fn product(&self) -> Mat {
        self.ts
            .iter()
            .map(|t| self.us.iter().map(|u| trace_product(t, u)).collect())
            .collect()
    }

    /// Rounds every entry to a rational with bounded denominator and keeps
    /// the first rounding that factors `m` exactly.
    pub fn rationalize(&self, m: &RationalMatrix) -> Result<Option<PsdFactorization>> {
        let round = |a: &Mat, cap: u64| -> Option<RationalMatrix> {
            let n = a.len();
            let mut entries = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    // symmetrize before rounding so the result is symmetric
                    entries.push(from_f64_bounded((a[i][j] + a[j][i]) / 2.0, cap)?);
                }
            }
            RationalMatrix::from_entries(n, n, entries).ok()
        };
        for cap in [1u64, 10, 100, 1_000, 10_000, 100_000, 1_000_000] {
            let ts: Option<Vec<RationalMatrix>> = self.ts.iter().map(|t| round(t, cap)).collect();
            let us: Option<Vec<RationalMatrix>> = self.us.iter().map(|u| round(u, cap)).collect();
            let (Some(ts), Some(us)) = (ts, us) else { continue };
            let Ok(f) = PsdFactorization::new(self.r, ts, us) else { continue };
            if verify_psd_factorization(m, &f)?.passed() {
                return Ok(Some(f));
            }
        }
        Ok(None)
    }
}

/// `T_i = ρ_i`, `U^j = Σ_θ θ E^j_θ`.
pub fn protocol_to_psd_factorization(p: &OneWayProtocol) -> FloatPsdFactorization {
    FloatPsdFactorization {
        r: p.message_dim,
        ts: p.states.iter().map(|s| s.entries().clone()).collect(),
        us: p.measurements.iter().map(Povm::observable).collect(),
    }
}

fn to_float(a: &RationalMatrix) -> Mat {
    a.to_f64_rows()
}

/// States `T_i/τ ⊕ (1 − tr T_i/τ)` with `τ = max tr T_i`; measurement `j`
/// outputs `τλ_j` on `U^j/λ_j ⊕ 0` (`λ_j` the largest eigenvalue) and `0`
/// otherwise. Messages have dimension `r + 1`.
pub fn protocol_from_psd_factorization(f: &PsdFactorization) -> Result<OneWayProtocol> {
    let r = f.r;
    let traces: Vec<Rational> = f.ts.iter().map(RationalMatrix::trace).collect();
    let tau = traces.iter().cloned().max().map_or(0.0, |t| to_f64(&t));
    let mut states = Vec::with_capacity(f.ts.len());
    for (t, tr) in f.ts.iter().zip(&traces) {
        let rho = if tau == 0.0 {
            // every T_i is zero: send the slack basis vector
            pad(&vec![vec![0.0; r]; r], 1.0)
        } else {
            let scaled: Mat = to_float(t).iter().map(|row| row.iter().map(|x| x / tau).collect()).collect();
            pad(&scaled, 1.0 - to_f64(tr) / tau)
        };
        states.push(DensityMatrix::new(r + 1, rho)?);
    }
    let mut measurements = Vec::with_capacity(f.us.len());
    for u in &f.us {
        if u.is_zero() {
            measurements.push(Povm::trivial(r + 1, 0.0)?);
            continue;
        }
        let uf = to_float(u);
        let lambda = *eigenvalues(&uf).last().expect("nonempty");
        let e: Mat = pad(
            &uf.iter().map(|row| row.iter().map(|x| x / lambda).collect()).collect::<Mat>(),
            0.0,
        );
        let e0 = sub(&identity(r + 1), &e);
        measurements.push(Povm::new(
            r + 1,
            vec![
                PovmElement {
                    label: tau * lambda,
                    operator: e,
                },
                PovmElement {
                    label: 0.0,
                    operator: e0,
                },
            ],
        )?);
    }
    OneWayProtocol::new(r + 1, states, measurements)
}

/// Pure-state protocol whose expected output is `N_ij²`.
///
/// With `Nᵀ = U Σ V` of rank `r`, `φ_i = Σ V e_i`, `Δ = max ‖φ_i‖`, Alice
/// sends `ψ_i = (φ_i/Δ, √(1 − ‖φ_i‖²/Δ²))`; Bob outputs `Δ²` on
/// `(u_j, 0)(u_j, 0)ᵀ` (`u_j` row `j` of `U`) and `0` otherwise.
pub fn protocol_from_entrywise_sqrt(n: &[Vec<f64>]) -> Result<OneWayProtocol> {
    let cols = n.first().map_or(0, Vec::len);
    if n.is_empty() || cols == 0 || n.iter().any(|r| r.len() != cols) {
        return Err(Error::dim("matrix must be nonempty and rectangular"));
    }
    if n.iter().flatten().all(|&x| x == 0.0) {
        return Err(Error::input("matrix is zero"));
    }
    let nt: Mat = (0..cols).map(|j| n.iter().map(|row| row[j]).collect()).collect();
    let svd = svd_small(&nt)?;
    let r = svd.rank;
    let phi: Mat = (0..n.len())
        .map(|i| (0..r).map(|k| svd.sigma[k] * svd.v[k][i]).collect())
        .collect();
    let norms: Vec<f64> = phi.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    let delta = norms.iter().copied().fold(0.0, f64::max);
    let mut states = Vec::with_capacity(n.len());
    for (v, norm) in phi.iter().zip(&norms) {
        let mut psi: Vec<f64> = v.iter().map(|x| x / delta).collect();
        psi.push((1.0 - (norm / delta).powi(2)).max(0.0).sqrt());
        states.push(DensityMatrix::pure(&psi)?);
    }
    let mut measurements = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut u: Vec<f64> = svd.u[j][..r].to_vec();
        u.push(0.0);
        let e = outer(&u);
        let e0 = sub(&identity(r + 1), &e);
        measurements.push(Povm::new(
            r + 1,
            vec![
                PovmElement {
                    label: delta * delta,
                    operator: e,
                },
                PovmElement {
                    label: 0.0,
                    operator: e0,
                },
            ],
        )?);
    }
    OneWayProtocol::new(r + 1, states, measurements)
}
