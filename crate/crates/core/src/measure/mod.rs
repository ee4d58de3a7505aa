//! Haar-measure computations approximated along quotient towers.
//!
//! On a finite group Haar measure is normalised counting measure, so every
//! number produced here is an exact count over an explicit finite quotient
//! (or a seeded Monte-Carlo estimate of one, always flagged as such).

use thiserror::Error;

use crate::exec::ExecMode;
use crate::groups::GroupError;
use crate::words::WordError;

mod cc;
mod coset;
mod prob;

pub use cc::{cc_measure, CcLevel, CcReport, ClassMeasure, DIVERGENCE_FACTOR};
pub use coset::{
    coset_scan, default_family, witness_lift, CosetWitness, LiftMethod, LiftOutcome, LiftStatus, REFUTATION_SAMPLES,
};
pub use prob::{
    count_solutions, prob_exact, prob_montecarlo, torsion_fraction, tower_prob, wilson_interval, ExactProbability,
    LevelProbability, Method, MonteCarloEstimate, ProbConfig, ProbabilityReport, MC_CHUNK, Z_99,
};

/// Default cap on word evaluations for exhaustive enumeration.
pub const DEFAULT_EVALUATION_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_evaluations: u64,
    pub mode: ExecMode,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_evaluations: DEFAULT_EVALUATION_BUDGET, mode: ExecMode::default() }
    }
}

impl Budget {
    pub fn with_mode(mode: ExecMode) -> Self {
        Budget { mode, ..Budget::default() }
    }

    /// `base^exp` if it is within budget.
    pub(crate) fn tuples(&self, base: u64, exp: usize) -> Result<u64, MeasureError> {
        let needed = (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
        if needed > self.max_evaluations as u128 {
            return Err(MeasureError::BudgetExceeded { needed, budget: self.max_evaluations });
        }
        Ok(needed as u64)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("enumeration needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("Monte-Carlo estimation needs at least one sample")]
    ZeroSamples,
    #[error("probability increased from level {from} to level {to}: quotient monotonicity violated")]
    Monotonicity { from: u32, to: u32 },
    #[error("subgroup '{0}' in the scanning family is not a subgroup")]
    NotSubgroup(String),
    #[error("witness level {0} is not part of the tower")]
    LevelNotInTower(u32),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
