//! Compilers from CNF formulas to gadget games.
//!
//! [`build_gphi`] produces the base game: one three-player gadget per
//! variable, one evaluator per clause, and a complete binary AND-tree of
//! players whose root `E` reports whether the formula holds. The variants add
//! a constraint, rescale `E`'s table, attach a matching-pennies pair that
//! only plays when `E` says "false", or make every player depend on `E`.

mod canonical;
mod cnf;
mod gphi;

pub use canonical::{canonical_profile, FEncoding};
pub use cnf::{pad_clauses, parse_dimacs, CnfError, CnfFormula, TruthAssignment, MAX_ARITY};
pub use gphi::{
    build_action_constrained_instance, build_another_nash_instance, build_gamma_scaled,
    build_gphi, build_payoff_constrained_instance,
};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::equilibrium::Constraint;
use crate::game::{GameDef, GameError, GraphicalGame, PlayerId};
use crate::rational::{RatString, Rational};
use crate::strategy::StrategyError;

#[derive(Debug, thiserror::Error)]
pub enum ReductionError {
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("alpha must be positive")]
    NonPositiveAlpha,
    #[error("gamma must be positive")]
    NonPositiveGamma,
    #[error("assignment covers {actual} variables, the padded formula has {expected}")]
    AssignmentLength { expected: usize, actual: usize },
    #[error("the pennies pair is not supported by this construction")]
    PenniesUnsupported,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    /// `xᵢ`, whose action is the truth value of variable `i`.
    Variable,
    VariablePrime,
    VariableDoublePrime,
    Clause,
    Tree,
    /// `E`.
    Root,
    P1,
    P2,
}

/// The three players of one variable gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VariableGadget {
    pub x: PlayerId,
    pub x_prime: PlayerId,
    pub x_double_prime: PlayerId,
}

/// A gate of the AND-tree: an internal tree player or `E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub node: PlayerId,
    pub left: PlayerId,
    pub right: PlayerId,
}

/// The AND-tree over clause players. Gates are listed bottom-up, so each
/// gate's children precede it; the root is last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AndTree {
    pub root: PlayerId,
    pub gates: Vec<Gate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionArtifacts {
    pub game: GraphicalGame,
    /// The padded formula the game encodes.
    pub cnf: CnfFormula,
    /// Role of each player, indexed by id.
    pub roles: Vec<Role>,
    /// Gadget of variable `i + 1`.
    pub var_map: Vec<VariableGadget>,
    /// Player of clause `j + 1`.
    pub clause_map: Vec<PlayerId>,
    pub tree: AndTree,
    pub gamma: Option<Rational>,
    pub alpha: Option<Rational>,
    /// `(P₁, P₂)` when present.
    pub pennies: Option<(PlayerId, PlayerId)>,
}

impl ReductionArtifacts {
    pub fn root(&self) -> PlayerId {
        self.tree.root
    }

    pub fn role(&self, p: PlayerId) -> Role {
        self.roles[p.0]
    }

    pub fn players_with_role(&self, role: Role) -> Vec<PlayerId> {
        self.game.ids().filter(|&p| self.roles[p.0] == role).collect()
    }

    pub fn to_doc(&self, constraints: &[Constraint]) -> ArtifactDoc {
        let name = |p: PlayerId| self.game.name(p).to_string();
        ArtifactDoc {
            game: self.game.to_def(),
            roles: self.game.ids().map(|p| (name(p), self.roles[p.0])).collect(),
            var_map: self
                .var_map
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    (
                        (i + 1).to_string(),
                        [name(g.x), name(g.x_prime), name(g.x_double_prime)],
                    )
                })
                .collect(),
            clause_map: self
                .clause_map
                .iter()
                .enumerate()
                .map(|(j, &c)| ((j + 1).to_string(), name(c)))
                .collect(),
            tree: TreeDoc {
                root: name(self.tree.root),
                children: self
                    .tree
                    .gates
                    .iter()
                    .map(|g| (name(g.node), [name(g.left), name(g.right)]))
                    .collect(),
            },
            gamma: self.gamma.as_ref().map(RatString::from),
            alpha: self.alpha.as_ref().map(RatString::from),
            formula: self.cnf.clone(),
            constraints: constraints.to_vec(),
        }
    }

    /// Byte-deterministic pretty JSON of [`Self::to_doc`].
    pub fn to_json(&self, constraints: &[Constraint]) -> String {
        serde_json::to_string_pretty(&self.to_doc(constraints)).expect("artifact serializes")
    }
}

/// JSON form of [`ReductionArtifacts`]: a game document (readable wherever a
/// game is expected) with the reduction metadata alongside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArtifactDoc {
    #[serde(flatten)]
    pub game: GameDef,
    pub roles: IndexMap<String, Role>,
    pub var_map: IndexMap<String, [String; 3]>,
    pub clause_map: IndexMap<String, String>,
    pub tree: TreeDoc,
    pub gamma: Option<RatString>,
    pub alpha: Option<RatString>,
    pub formula: CnfFormula,
    #[serde(default)]
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeDoc {
    pub root: String,
    pub children: IndexMap<String, [String; 2]>,
}
