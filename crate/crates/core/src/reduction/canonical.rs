use serde::{Deserialize, Serialize};

use super::{ReductionArtifacts, ReductionError, TruthAssignment};
use crate::rational::rat;
use crate::strategy::{MixedStrategy, Profile};

/// How a false variable's `x′`/`x″` pair is realized in a canonical profile.
/// A true variable always uses both-F.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FEncoding {
    /// Both play T.
    S2ForFalse,
    /// Both play T with probability 1/2.
    #[default]
    S3ForFalse,
}

/// The Nash equilibrium of the gadget game that encodes `sigma`.
///
/// Variable players play their truth values, clause players evaluate their
/// clauses, and the tree players and `E` compute the AND of their children.
/// If the pennies pair is present both of its players mix uniformly.
pub fn canonical_profile(
    artifacts: &ReductionArtifacts,
    sigma: &TruthAssignment,
    encoding: FEncoding,
) -> Result<Profile, ReductionError> {
    let cnf = &artifacts.cnf;
    if sigma.len() != cnf.num_vars() {
        return Err(ReductionError::AssignmentLength {
            expected: cnf.num_vars(),
            actual: sigma.len(),
        });
    }
    let game = &artifacts.game;
    let boolean = |b: bool| MixedStrategy::pure(2, usize::from(!b));
    let mut value = vec![false; game.num_players()];
    let mut x = Profile::empty(game);

    for (i, gadget) in artifacts.var_map.iter().enumerate() {
        let truth = sigma.value(i + 1);
        x.set(game, gadget.x, boolean(truth))?;
        let pair = if truth {
            boolean(false)
        } else {
            match encoding {
                FEncoding::S2ForFalse => boolean(true),
                FEncoding::S3ForFalse => MixedStrategy::binary(rat(1, 2))?,
            }
        };
        x.set(game, gadget.x_prime, pair.clone())?;
        x.set(game, gadget.x_double_prime, pair)?;
    }
    for (j, &c) in artifacts.clause_map.iter().enumerate() {
        value[c.0] = cnf.clause_value(j, sigma);
        x.set(game, c, boolean(value[c.0]))?;
    }
    for gate in &artifacts.tree.gates {
        value[gate.node.0] = value[gate.left.0] && value[gate.right.0];
        x.set(game, gate.node, boolean(value[gate.node.0]))?;
    }
    if let Some((p1, p2)) = artifacts.pennies {
        x.set(game, p1, MixedStrategy::uniform(2))?;
        x.set(game, p2, MixedStrategy::uniform(2))?;
    }
    Ok(x)
}
