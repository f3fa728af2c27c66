//! Node budgets for exhaustive searches.

use crate::error::{Error, Result};
use std::sync::atomic::{AtomicU64, Ordering};

/// Environment variable overriding the default node budget.
pub const BUDGET_ENV: &str = "TURANLAB_BUDGET";

pub const DEFAULT_BUDGET: u64 = 500_000_000;

/// Upper bound on search nodes visited by one enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    /// `TURANLAB_BUDGET` if set and parseable, otherwise [`DEFAULT_BUDGET`].
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map_or(Budget(DEFAULT_BUDGET), Budget)
    }

    pub fn unlimited() -> Self {
        Budget(u64::MAX)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::from_env()
    }
}

/// Shared node counter; cheap enough to tick once per search node.
#[derive(Debug)]
pub(crate) struct Meter {
    used: AtomicU64,
    limit: u64,
}

impl Meter {
    pub(crate) fn new(budget: Budget) -> Self {
        Meter {
            used: AtomicU64::new(0),
            limit: budget.0,
        }
    }

    #[inline]
    pub(crate) fn tick(&self) -> Result<()> {
        let used = self.used.fetch_add(1, Ordering::Relaxed);
        if used >= self.limit {
            Err(Error::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }
}
