//! Enumeration budgets for the exhaustive searches.

/// Upper bound on the number of profiles (or deviations) a search may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_evaluations: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_evaluations: 1 << 22,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("search needs {needed} evaluations, budget is {budget}")]
pub struct BudgetExceeded {
    pub needed: u128,
    pub budget: u64,
}

impl Budget {
    pub fn new(max_evaluations: u64) -> Self {
        Self { max_evaluations }
    }

    pub fn check(&self, needed: u128) -> Result<(), BudgetExceeded> {
        if needed > self.max_evaluations as u128 {
            Err(BudgetExceeded {
                needed,
                budget: self.max_evaluations,
            })
        } else {
            Ok(())
        }
    }
}

/// `∏ factors`, saturating at `u128::MAX`.
pub(crate) fn saturating_product(factors: impl IntoIterator<Item = u128>) -> u128 {
    factors
        .into_iter()
        .fold(1u128, |acc, f| acc.saturating_mul(f))
}
