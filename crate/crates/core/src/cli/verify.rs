use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ExperimentConfig;
use crate::bounds::{fooling_set, min_rectangle_cover};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exactmath::{rat, support, Rational, RationalMatrix};
use crate::factorization::{
    explicit_psd_factorization_m, extend_to_redundant_rows, extension_from_nonneg_factorization,
    factorization_from_extension, psd_rank_upper_from_sqrt, verify_nonneg_factorization, verify_psd_factorization,
    NonnegFactorization, Verdict,
};
use crate::gadgets::{
    build_d, build_g, build_h, build_phi, cor_inequalities, enumerate_tours_bounded, face_f_stable_sets, matrix_m,
    matrix_n, project_pi_stab, project_pi_tsp, tour_from_assignment, verify_directed_tour, verify_hamiltonian_cycle,
    BitString, Graph,
};
use crate::polytope::{
    cor_vertex, covariance_iso, gen_cor, gen_cut, gen_stab, polytope_slack_matrix, slack_matrix, Point, Polytope,
};
use crate::quantum::{protocol_from_entrywise_sqrt, protocol_from_psd_factorization, OneWayProtocol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum Suite {
    #[value(name = "factorization-roundtrip")]
    FactorizationRoundtrip,
    #[value(name = "gadget-Hn")]
    GadgetHn,
    #[value(name = "gadget-tsp")]
    GadgetTsp,
    #[value(name = "slack-identity")]
    SlackIdentity,
    #[value(name = "covariance")]
    Covariance,
    #[value(name = "psd-explicit")]
    PsdExplicit,
    #[value(name = "cover")]
    Cover,
    #[value(name = "quantum")]
    Quantum,
    /// Checks `S = T U` for the JSON fixture given with `--input`.
    #[value(name = "nonneg-fixture")]
    NonnegFixture,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::FactorizationRoundtrip => "factorization-roundtrip",
            Suite::GadgetHn => "gadget-Hn",
            Suite::GadgetTsp => "gadget-tsp",
            Suite::SlackIdentity => "slack-identity",
            Suite::Covariance => "covariance",
            Suite::PsdExplicit => "psd-explicit",
            Suite::Cover => "cover",
            Suite::Quantum => "quantum",
            Suite::NonnegFixture => "nonneg-fixture",
        }
    }

    /// Every suite that needs no input file.
    pub fn builtin() -> [Suite; 8] {
        [
            Suite::FactorizationRoundtrip,
            Suite::GadgetHn,
            Suite::GadgetTsp,
            Suite::SlackIdentity,
            Suite::Covariance,
            Suite::PsdExplicit,
            Suite::Cover,
            Suite::Quantum,
        ]
    }
}

/// First failed check, with the offending matrix position when there is one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub row: Option<usize>,
    pub col: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub suite: String,
    pub passed: bool,
    pub checks: usize,
    pub failure: Option<Failure>,
}

/// `{"matrix": ..., "T": ..., "U": ...}` with matrices in the rational
/// matrix codec.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonnegFixture {
    pub matrix: RationalMatrix,
    #[serde(rename = "T")]
    pub t: RationalMatrix,
    #[serde(rename = "U")]
    pub u: RationalMatrix,
}

#[derive(Default)]
struct Checks {
    count: usize,
    failure: Option<Failure>,
}

impl Checks {
    fn ensure(&mut self, ok: bool, check: impl FnOnce() -> String) {
        self.count += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(Failure {
                check: check(),
                row: None,
                col: None,
                detail: String::new(),
            });
        }
    }

    fn verdict(&mut self, v: &Verdict, check: impl FnOnce() -> String) {
        self.count += 1;
        if let Verdict::Fail { row, col, reason } = v {
            if self.failure.is_none() {
                self.failure = Some(Failure {
                    check: check(),
                    row: Some(*row),
                    col: Some(*col),
                    detail: reason.clone(),
                });
            }
        }
    }

    fn first_difference(&mut self, got: &RationalMatrix, want: &RationalMatrix, check: impl FnOnce() -> String) {
        let v = if got.shape() != want.shape() {
            Verdict::Fail {
                row: 0,
                col: 0,
                reason: format!("shape {:?} instead of {:?}", got.shape(), want.shape()),
            }
        } else {
            (0..got.rows())
                .flat_map(|i| (0..got.cols()).map(move |j| (i, j)))
                .find(|&(i, j)| got[(i, j)] != want[(i, j)])
                .map_or(Verdict::Pass, |(i, j)| Verdict::Fail {
                    row: i,
                    col: j,
                    reason: format!("{} instead of {}", got[(i, j)], want[(i, j)]),
                })
        };
        self.verdict(&v, check);
    }
}

fn clamp(config: &ExperimentConfig, lo: usize, hi: usize) -> std::ops::RangeInclusive<usize> {
    config.n_min.max(lo)..=config.n_max.min(hi)
}

pub fn cmd_verify(suite: Suite, config: &ExperimentConfig) -> Result<VerifySummary> {
    config.validate()?;
    let mut c = Checks::default();
    match suite {
        Suite::FactorizationRoundtrip => factorization_roundtrip(&mut c)?,
        Suite::GadgetHn => gadget_hn(&mut c, config)?,
        Suite::GadgetTsp => gadget_tsp(&mut c, config)?,
        Suite::SlackIdentity => slack_identity(&mut c, config)?,
        Suite::Covariance => covariance(&mut c, config)?,
        Suite::PsdExplicit => psd_explicit(&mut c, config)?,
        Suite::Cover => cover(&mut c, config)?,
        Suite::Quantum => quantum(&mut c, config)?,
        Suite::NonnegFixture => nonneg_fixture(&mut c, config)?,
    }
    Ok(VerifySummary {
        suite: suite.name().to_string(),
        passed: c.failure.is_none(),
        checks: c.count,
        failure: c.failure,
    })
}

fn roundtrip_polytopes() -> Result<Vec<(&'static str, Polytope)>> {
    Ok(vec![
        ("CUT(3)", gen_cut(3)?.with_hrep(None)?),
        ("COR(2)", gen_cor(2)?.with_hrep(None)?),
        ("STAB(K3)", gen_stab(&Graph::complete(3))?.with_hrep(None)?),
        ("STAB(C5)", gen_stab(&Graph::cycle(5))?.with_hrep(None)?),
    ])
}

fn factorization_roundtrip(c: &mut Checks) -> Result<()> {
    for (name, p) in roundtrip_polytopes()? {
        let s = polytope_slack_matrix(&p)?;
        let f = NonnegFactorization::trivial(&s.matrix)?;
        let ext = extension_from_nonneg_factorization(&p, &f)?;
        let verts = p.require_vertices()?;
        c.ensure(ext.check_lifts(verts).is_ok(), || format!("{name}: vertex lifts"));
        let g = factorization_from_extension(&ext, &p, None)?;
        c.verdict(&verify_nonneg_factorization(&s.matrix, &g)?, || format!("{name}: S = TU"));

        // three redundant rows and two relative-interior points
        let (a, b) = p.require_inequalities()?;
        let k = a.rows();
        let sum_row: Vec<Rational> = a.row(0).iter().zip(a.row(k - 1)).map(|(x, y)| x + y).collect();
        let extra = RationalMatrix::from_rows(vec![
            sum_row,
            a.row(0).iter().map(|x| x * rat(2, 1)).collect(),
            a.row(k - 1).to_vec(),
        ])?;
        let rows = a.vstack(&extra)?;
        let mut rhs = b.to_vec();
        rhs.extend([&b[0] + &b[k - 1], &b[0] * rat(2, 1), b[k - 1].clone()]);
        let centroid: Point = (0..p.dim())
            .map(|d| verts.iter().map(|v| v[d].clone()).sum::<Rational>() / rat(verts.len() as i64, 1))
            .collect();
        let near: Point = centroid.iter().zip(&verts[0]).map(|(x, y)| (x + y) / rat(2, 1)).collect();
        let mut pts = verts.to_vec();
        pts.extend([centroid, near]);
        let h = extend_to_redundant_rows(&g, &p, (&rows, &rhs), &pts)?;
        let big = slack_matrix(&rows, &rhs, &pts)?;
        c.verdict(&verify_nonneg_factorization(&big.matrix, &h)?, || {
            format!("{name}: redundant rows and points")
        });
        c.ensure(h.inner_dim() <= g.inner_dim(), || format!("{name}: inner dimension grew"));
    }
    Ok(())
}

fn cor_vertex_set(n: usize) -> Result<BTreeSet<Point>> {
    Ok(gen_cor(n)?.require_vertices()?.iter().cloned().collect())
}

fn gadget_hn(c: &mut Checks, config: &ExperimentConfig) -> Result<()> {
    for n in clamp(config, 1, 3) {
        let h = build_h(n)?;
        let sets = face_f_stable_sets(&h, n)?;
        c.ensure(sets.len() == 1 << n, || format!("H{n}: {} face stable sets", sets.len()));
        let images: BTreeSet<Point> = sets.iter().map(|s| project_pi_stab(s, n)).collect::<Result<_>>()?;
        c.ensure(images.len() == sets.len(), || format!("H{n}: projection not injective"));
        c.ensure(images == cor_vertex_set(n)?, || format!("H{n}: image is not the COR vertex set"));
    }
    Ok(())
}

fn gadget_tsp(c: &mut Checks, config: &ExperimentConfig) -> Result<()> {
    for n in clamp(config, 1, 3) {
        let phi = build_phi(n)?;
        let got: BTreeSet<Vec<bool>> = phi.satisfying_assignments()?.into_iter().collect();
        let want: BTreeSet<Vec<bool>> = BitString::all(n)
            .map(|b| (0..n * n).map(|k| b.get(k / n) && b.get(k % n)).collect())
            .collect();
        c.ensure(got == want, || format!("phi{n}: satisfying assignments are not the outer products"));
    }
    for n in clamp(config, 1, 2) {
        let gd = build_d(n)?;
        let g = build_g(&gd.digraph)?;
        for b in BitString::all(n) {
            let cycle = tour_from_assignment(&b, &gd, &g)?;
            c.ensure(verify_hamiltonian_cycle(&g, &cycle).is_ok(), || format!("G{n}: cycle for {b:?}"));
            c.ensure(project_pi_tsp(&cycle, &gd) == cor_vertex(b.bits()), || {
                format!("G{n}: projection of the cycle for {b:?}")
            });
        }
    }
    if config.n_min <= 1 {
        let gd = build_d(1)?;
        let e = enumerate_tours_bounded(&gd.digraph, &mut Budget::unlimited());
        c.ensure(e.complete && !e.tours.is_empty(), || "D1: enumeration".into());
        for t in &e.tours {
            c.ensure(verify_directed_tour(&gd.digraph, t).is_ok(), || "D1: invalid tour".into());
            c.ensure(gd.phi.evaluate(&gd.assignment(t)), || "D1: tour assignment unsatisfying".into());
        }
    }
    Ok(())
}

fn slack_identity(c: &mut Checks, config: &ExperimentConfig) -> Result<()> {
    for n in clamp(config, 1, 4) {
        let (a, b) = cor_inequalities(n);
        let s = slack_matrix(&a, &b, gen_cor(n)?.require_vertices()?)?;
        c.first_difference(&s.matrix, &matrix_m(n)?, || format!("COR({n}) slack = M({n})"));
    }
    Ok(())
}

fn covariance(c: &mut Checks, config: &ExperimentConfig) -> Result<()> {
    for n in clamp(config, 1, 4) {
        let (fwd, inv) = covariance_iso(n)?;
        let cut = gen_cut(n + 1)?;
        let verts = cut.require_vertices()?;
        let images: Vec<Point> = verts.iter().map(|v| fwd.apply(v)).collect::<Result<_>>()?;
        let distinct: BTreeSet<Point> = images.iter().cloned().collect();
        c.ensure(distinct.len() == verts.len(), || format!("n={n}: covariance map not injective on vertices"));
        c.ensure(distinct == cor_vertex_set(n)?, || format!("n={n}: image is not the COR vertex set"));
        for (v, y) in verts.iter().zip(&images) {
            c.ensure(&inv.apply(y)? == v, || format!("n={n}: inverse map"));
        }
    }
    Ok(())
}

fn psd_explicit(c: &mut Checks, config: &ExperimentConfig) -> Result<()> {
    for n in config.n_range() {
        let f = explicit_psd_factorization_m(n)?;
        c.ensure(f.r == n + 1, || format!("M({n}): dimension {}", f.r));
        c.verdict(&verify_psd_factorization(&matrix_m(n)?, &f)?, || format!("M({n}) explicit PSD factorization"));
    }
    Ok(())
}

fn cover(c: &mut Checks, config: &ExperimentConfig) -> Result<()> {
    for n in clamp(config, 1, 4) {
        let m = matrix_m(n)?;
        let b = support(&m);
        let cov = min_rectangle_cover(&b, &mut config.budget(), config.max_rectangles)?;
        c.ensure(cov.optimal, || format!("M({n}): cover search out of budget"));
        c.ensure(cov.is_valid_for(&b), || format!("M({n}): invalid cover"));
        c.ensure(fooling_set(&b).len() <= cov.size, || format!("M({n}): fooling set exceeds cover"));
    }
    Ok(())
}

fn max_error(p: &OneWayProtocol, m: &RationalMatrix) -> f64 {
    let want = m.to_f64_rows();
    p.expected_matrix()
        .iter()
        .flatten()
        .zip(want.iter().flatten())
        .fold(0.0, |e, (x, y)| e.max((x - y).abs()))
}

fn quantum(c: &mut Checks, config: &ExperimentConfig) -> Result<()> {
    for n in clamp(config, 1, 3) {
        let m = matrix_m(n)?;
        let p = protocol_from_psd_factorization(&explicit_psd_factorization_m(n)?)?;
        c.ensure(max_error(&p, &m) <= 1e-9, || format!("M({n}): PSD protocol expectations"));
        let nm = matrix_n(n)?;
        let q = protocol_from_entrywise_sqrt(&nm.to_f64_rows())?;
        c.ensure(q.message_dim() <= nm.rank() + 1, || format!("N({n}): message dimension {}", q.message_dim()));
        c.ensure(max_error(&q, &m) <= 1e-8, || format!("N({n}): sqrt protocol expectations"));
        for proto in [&p, &q] {
            let (rows, cols) = proto.shape();
            for i in 0..rows {
                for j in 0..cols {
                    let seed = config.seed ^ ((n as u64) << 40 | (i as u64) << 20 | j as u64);
                    let (mean, _) = proto.sample_mean(i, j, config.samples, seed)?;
                    let top = proto.measurements()[j].max_label();
                    let tol = 5.0 * top / (config.samples as f64).sqrt();
                    let expected = proto.expected_output(i, j)?;
                    c.ensure((mean - expected).abs() <= tol, || {
                        format!("M({n}): sampled mean {mean} at ({i}, {j}) vs {expected}")
                    });
                }
            }
        }
    }
    // stable-set slack matrix is 0/1, hence its own entrywise square root
    let p = gen_stab(&Graph::complete(3))?.with_hrep(None)?;
    let s = polytope_slack_matrix(&p)?.matrix;
    let f = psd_rank_upper_from_sqrt(&s, &s)?;
    c.ensure(f.r <= p.dim() + 2, || format!("STAB(K3): PSD dimension {}", f.r));
    c.verdict(&verify_psd_factorization(&s, &f)?, || "STAB(K3) PSD factorization".into());
    Ok(())
}

fn nonneg_fixture(c: &mut Checks, config: &ExperimentConfig) -> Result<()> {
    let path = config
        .input
        .as_ref()
        .ok_or_else(|| Error::input("nonneg-fixture needs --input"))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    let fx: NonnegFixture = serde_json::from_str(&text).map_err(|e| Error::Codec(e.to_string()))?;
    let f = NonnegFactorization::new(fx.t, fx.u)?;
    c.verdict(&verify_nonneg_factorization(&fx.matrix, &f)?, || "S = TU".into());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            n_max: 3,
            samples: 2_000,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn builtin_suites_pass() {
        for s in Suite::builtin() {
            let r = cmd_verify(s, &small()).unwrap();
            assert!(r.passed, "{}: {:?}", r.suite, r.failure);
            assert!(r.checks > 0);
        }
    }

    #[test]
    fn fixture_needs_input() {
        assert!(cmd_verify(Suite::NonnegFixture, &small()).is_err());
    }
}
