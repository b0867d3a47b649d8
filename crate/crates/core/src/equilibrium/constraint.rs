//! Action and payoff constraints, and the non-random requirement.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{is_nash, require_global, EquilibriumError, NashReport};
use crate::game::{GraphicalGame, PlayerId};
use crate::rational::{serde_rational, zero, Rational};
use crate::strategy::{expected_payoff, Profile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=", alias = "==")]
    Eq,
    #[serde(rename = "!=", alias = "≠")]
    Ne,
    #[serde(rename = "<=", alias = "≤")]
    Le,
    #[serde(rename = ">=", alias = "≥")]
    Ge,
}

impl CmpOp {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }

    pub fn negated(self) -> CmpOp {
        match self {
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Gt => CmpOp::Le,
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Ge => CmpOp::Lt,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
        }
    }
}

/// Catalog of evaluation functions over the member payoffs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalFn {
    /// The payoff of the single listed player.
    Single,
    Sum,
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Constraint {
    /// `[p_a(i) op k]`.
    Action {
        player: String,
        action: String,
        op: CmpOp,
        #[serde(with = "serde_rational")]
        k: Rational,
    },
    /// `[f_{P'} op k]`.
    Payoff {
        players: Vec<String>,
        eval: EvalFn,
        op: CmpOp,
        #[serde(with = "serde_rational")]
        k: Rational,
    },
}

impl Constraint {
    pub fn negated(&self) -> Constraint {
        let mut c = self.clone();
        match &mut c {
            Constraint::Action { op, .. } | Constraint::Payoff { op, .. } => *op = op.negated(),
        }
        c
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Action {
                player,
                action,
                op,
                k,
            } => write!(f, "[p_{action}({player}) {} {k}]", op.symbol()),
            Constraint::Payoff {
                players,
                eval,
                op,
                k,
            } => write!(
                f,
                "[{eval:?}(pay {}) {} {k}]",
                players.join(","),
                op.symbol()
            ),
        }
    }
}

/// `x ⊨ c`. The profile must cover the referenced players (and, for payoff
/// constraints, their neighbors).
pub fn satisfies_constraint(
    game: &GraphicalGame,
    profile: &Profile,
    constraint: &Constraint,
) -> Result<bool, EquilibriumError> {
    match constraint {
        Constraint::Action {
            player,
            action,
            op,
            k,
        } => {
            let id = game.require(player)?;
            let a = game.action_index(id, action)?;
            let s = profile.strategy_of(game, id)?;
            Ok(op.holds(s.prob(a), k))
        }
        Constraint::Payoff {
            players,
            eval,
            op,
            k,
        } => {
            if players.is_empty() {
                return Err(EquilibriumError::InvalidConstraint(
                    "payoff constraint over an empty player set".into(),
                ));
            }
            if *eval == EvalFn::Single && players.len() != 1 {
                return Err(EquilibriumError::InvalidConstraint(
                    "eval \"single\" needs exactly one player".into(),
                ));
            }
            let pays = players
                .iter()
                .map(|name| {
                    let id = game.require(name)?;
                    Ok(expected_payoff(game, profile, id)?)
                })
                .collect::<Result<Vec<_>, EquilibriumError>>()?;
            let value = match eval {
                EvalFn::Single => pays[0].clone(),
                EvalFn::Sum => pays.iter().fold(zero(), |acc, p| acc + p),
                EvalFn::Min => pays.iter().min().cloned().expect("non-empty"),
                EvalFn::Max => pays.iter().max().cloned().expect("non-empty"),
            };
            Ok(op.holds(&value, k))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstrainedReport {
    pub nash: NashReport,
    pub satisfied: Vec<bool>,
    /// Nash and every constraint holds.
    pub is_constrained_equilibrium: bool,
}

/// Constrained-equilibrium check: exact Nash plus the conjunction of all
/// constraints.
pub fn check_constrained(
    game: &GraphicalGame,
    profile: &Profile,
    constraints: &[Constraint],
) -> Result<ConstrainedReport, EquilibriumError> {
    let nash = is_nash(game, profile, &zero())?;
    let satisfied = constraints
        .iter()
        .map(|c| satisfies_constraint(game, profile, c))
        .collect::<Result<Vec<_>, _>>()?;
    let is_constrained_equilibrium = nash.is_equilibrium && satisfied.iter().all(|&s| s);
    Ok(ConstrainedReport {
        nash,
        satisfied,
        is_constrained_equilibrium,
    })
}

/// Whether some player in `players` deviates from the uniform distribution.
pub fn non_random_satisfied(
    game: &GraphicalGame,
    profile: &Profile,
    players: &[PlayerId],
) -> Result<bool, EquilibriumError> {
    if players.is_empty() {
        return Err(EquilibriumError::EmptyPlayerSet);
    }
    require_global(game, profile)?;
    for &p in players {
        if !profile.strategy_of(game, p)?.is_uniform() {
            return Ok(true);
        }
    }
    Ok(false)
}
