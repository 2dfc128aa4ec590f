//! Experiment configuration and report generation behind the `xclab`
//! binary. Every command is a plain function returning its report so the
//! same output can be produced from tests.

mod gadget;
mod separation;
mod verify;

use std::path::PathBuf;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use gadget::{cmd_gadget, Format, GadgetKind};
pub use separation::{cmd_separation, separation_row, SeparationReport, SeparationRow, SEPARATION_MAX_N};
pub use verify::{cmd_verify, Failure, NonnegFixture, Suite, VerifySummary};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::factorization::explicit_psd_factorization_m;
use crate::quantum::{protocol_from_psd_factorization, sampling_report, OneWayProtocol};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    AssertionFailure = 1,
    InputError = 2,
    BudgetPartial = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn for_error(e: &Error) -> Self {
        match e {
            Error::Budget(_) => Exit::BudgetPartial,
            Error::Validity { .. } | Error::NotAnExtension(_) => Exit::AssertionFailure,
            _ => Exit::InputError,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_min: usize,
    pub n_max: usize,
    /// Optional wall-clock limit per search. Output is only reproducible
    /// when this limit is never hit.
    pub budget_ms: Option<u64>,
    /// Deterministic step budget per rectangle-cover search.
    pub cover_steps: u64,
    pub max_rectangles: usize,
    pub samples: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub input: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_min: 1,
            n_max: 4,
            budget_ms: None,
            cover_steps: 200_000,
            max_rectangles: 20_000,
            samples: 10_000,
            seed: 0,
            out: None,
            input: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s).map_err(|e| Error::Codec(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::input(format!("empty n range {}..={}", self.n_min, self.n_max)));
        }
        if self.budget_ms == Some(0) || self.cover_steps == 0 || self.max_rectangles == 0 || self.samples == 0 {
            return Err(Error::input("budgets and sample counts must be positive"));
        }
        Ok(())
    }

    pub fn n_range(&self) -> std::ops::RangeInclusive<usize> {
        self.n_min..=self.n_max
    }

    pub fn budget(&self) -> Budget {
        let b = Budget::steps(self.cover_steps);
        match self.budget_ms {
            Some(ms) => b.with_time_limit(Duration::from_millis(ms)),
            None => b,
        }
    }
}

/// Sampling CSV (`i,j,mean,stderr,expected`) for a protocol read from
/// `config.input`, or the protocol built from the explicit factorization
/// of `M(n)`.
pub fn cmd_sample(n: usize, config: &ExperimentConfig) -> Result<String> {
    let protocol = match &config.input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<OneWayProtocol>(&text).map_err(|e| Error::Codec(e.to_string()))?
        }
        None => protocol_from_psd_factorization(&explicit_psd_factorization_m(n)?)?,
    };
    let rows = sampling_report(&protocol, config.samples, config.seed)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r).map_err(|e| Error::Codec(e.to_string()))?;
    }
    csv_string(w)
}

pub(crate) fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Codec(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Codec(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_validation() {
        let c = ExperimentConfig::from_json("{}").unwrap();
        assert_eq!(c, ExperimentConfig::default());
        assert!(ExperimentConfig::from_json(r#"{"n_min":3,"n_max":2}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"samples":0}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"bogus":1}"#).is_err());
        let c = ExperimentConfig::from_json(r#"{"n_max":6,"seed":9}"#).unwrap();
        assert_eq!((c.n_max, c.seed), (6, 9));
    }

    #[test]
    fn sample_csv_is_reproducible() {
        let cfg = ExperimentConfig {
            samples: 100,
            seed: 3,
            ..ExperimentConfig::default()
        };
        let a = cmd_sample(1, &cfg).unwrap();
        assert!(a.starts_with("i,j,mean,stderr,expected\n"));
        assert_eq!(a.lines().count(), 5);
        assert_eq!(a, cmd_sample(1, &cfg).unwrap());
    }
}
