//! Equilibrium checks over exact rationals.
//!
//! Every headline verdict is exact (`ε = 0`). A player's payoff is linear in
//! its own mixed strategy, so a profile is a Nash equilibrium iff no player
//! gains from a *pure* unilateral deviation; [`best_response_regret`] checks
//! exactly that. Coalition payoffs are only multilinear in a joint deviation,
//! so the strong-equilibrium search distinguishes a sound refutation from a
//! bounded search that found nothing.

mod coalition;
mod constraint;
mod grid;
mod nash;
mod pair;
mod pareto;

pub use coalition::{
    coalition_improvement_grid, coalition_improvement_pure, joint_deviation_witness,
    strong_check_desk, DeviationWitness, StrongReport, StrongSearch, StrongVerdict,
};
pub use constraint::{
    check_constrained, non_random_satisfied, satisfies_constraint, CmpOp, ConstrainedReport,
    Constraint, EvalFn,
};
pub use grid::{grid_profiles, grid_profiles_for, grid_size, grid_strategies, GridProfiles};
pub use nash::{
    best_response_regret, enumerate_pure_nash, is_nash, nash_report_over, NashReport,
    PlayerRegret, Regret,
};
pub use pair::{enumerate_equilibria_2x2, PairEquilibria};
pub use pareto::{another_nash_desk, is_pareto_within, ParetoVerdict};

use crate::budget::BudgetExceeded;
use crate::game::GameError;
use crate::strategy::StrategyError;

#[derive(Debug, thiserror::Error)]
pub enum EquilibriumError {
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("profile is not global: {0:?} uncovered")]
    NotGlobal(String),
    #[error("epsilon must be non-negative")]
    NegativeEpsilon,
    #[error("grid denominator must be at least 1")]
    ZeroDenominator,
    #[error("player {0:?} does not have exactly two actions")]
    NotBinary(String),
    #[error("player {0:?} depends on players outside the pair")]
    NotSelfContained(String),
    #[error("the pair must consist of two distinct players")]
    DegeneratePair,
    #[error("candidate {0} is not a Nash equilibrium")]
    CandidateNotNash(usize),
    #[error("profile is not a Nash equilibrium")]
    ProfileNotNash,
    #[error("player set is empty")]
    EmptyPlayerSet,
    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),
}

pub(crate) fn require_global(
    game: &crate::GraphicalGame,
    profile: &crate::Profile,
) -> Result<(), EquilibriumError> {
    profile.check_game(game)?;
    match game.ids().find(|&id| !profile.covers(id)) {
        Some(id) => Err(EquilibriumError::NotGlobal(game.name(id).to_string())),
        None => Ok(()),
    }
}
