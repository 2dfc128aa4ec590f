use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Cooperative work budget shared by the enumerators.
///
/// Work is counted in abstract steps; an optional wall-clock deadline can be
/// layered on top (that makes results timing dependent, so reports that must
/// be byte-identical should rely on the step cap only).
#[derive(Debug, Clone)]
pub struct Budget {
    max_steps: Option<u64>,
    deadline: Option<Instant>,
    used: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self::unlimited()
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Self {
            max_steps: None,
            deadline: None,
            used: 0,
        }
    }

    pub fn steps(max_steps: u64) -> Self {
        Self {
            max_steps: Some(max_steps),
            ..Self::unlimited()
        }
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.deadline = Some(Instant::now() + limit);
        self
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn exhausted(&self) -> bool {
        if self.max_steps.is_some_and(|m| self.used > m) {
            return true;
        }
        // checking the clock on every step is wasteful
        self.used % 1024 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// Records `n` steps; errors once the budget is exceeded.
    pub fn tick(&mut self, n: u64, what: &str) -> Result<()> {
        self.used += n;
        if self.max_steps.is_some_and(|m| self.used > m)
            || self.deadline.is_some_and(|d| Instant::now() >= d)
        {
            return Err(Error::Budget(format!("{what} after {} steps", self.used)));
        }
        Ok(())
    }

    /// Like [`Budget::tick`] but returns false instead of an error.
    pub fn try_tick(&mut self, n: u64) -> bool {
        self.used += n;
        !(self.max_steps.is_some_and(|m| self.used > m)
            || (self.used % 256 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d)))
    }
}
