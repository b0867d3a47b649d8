use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{require_global, EquilibriumError};
use crate::budget::{saturating_product, Budget};
use crate::game::{GraphicalGame, JointActions, PlayerId};
use crate::rational::{serde_rational, Rational};
use crate::strategy::{payoff_breakdown, pure_profile_by_index, Profile};

/// Largest gain from a unilateral pure deviation, and the first action
/// achieving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regret {
    pub value: Rational,
    pub witness: Option<usize>,
}

/// `max_a pay_i(x₋ᵢ[a]) − pay_i(x)`, floored at zero. Only the player's own
/// strategy and those of its neighbors are read, so any profile covering
/// `{i} ∪ Neigh(i)` is accepted.
pub fn best_response_regret(
    game: &GraphicalGame,
    profile: &Profile,
    player: PlayerId,
) -> Result<Regret, EquilibriumError> {
    let b = payoff_breakdown(game, profile, player)?;
    let mut best: Option<(usize, &Rational)> = None;
    for (a, v) in b.per_action.iter().enumerate() {
        if best.is_none_or(|(_, bv)| v > bv) {
            best = Some((a, v));
        }
    }
    let Some((arg, top)) = best else {
        return Ok(Regret {
            value: Rational::zero(),
            witness: None,
        });
    };
    let gain = top - &b.value;
    if gain.is_positive() {
        Ok(Regret {
            value: gain,
            witness: Some(arg),
        })
    } else {
        Ok(Regret {
            value: Rational::zero(),
            witness: None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlayerRegret {
    #[serde(skip)]
    pub id: PlayerId,
    pub player: String,
    #[serde(with = "serde_rational")]
    pub regret: Rational,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NashReport {
    pub is_equilibrium: bool,
    #[serde(with = "serde_rational")]
    pub epsilon: Rational,
    pub regrets: Vec<PlayerRegret>,
    /// Player with the largest positive regret (first on ties) and its
    /// improving action.
    pub worst: Option<PlayerRegret>,
}

impl NashReport {
    pub fn regret_of(&self, id: PlayerId) -> Option<&Rational> {
        self.regrets.iter().find(|r| r.id == id).map(|r| &r.regret)
    }
}

/// Regret report restricted to `players`; profile needs only their closed
/// neighborhoods.
pub fn nash_report_over(
    game: &GraphicalGame,
    profile: &Profile,
    players: &[PlayerId],
    epsilon: &Rational,
) -> Result<NashReport, EquilibriumError> {
    if epsilon.is_negative() {
        return Err(EquilibriumError::NegativeEpsilon);
    }
    let mut regrets: Vec<PlayerRegret> = Vec::with_capacity(players.len());
    let mut worst: Option<usize> = None;
    for &id in players {
        let r = best_response_regret(game, profile, id)?;
        let entry = PlayerRegret {
            id,
            player: game.name(id).to_string(),
            witness: r
                .witness
                .map(|a| game.player(id).actions[a].clone()),
            regret: r.value,
        };
        if entry.regret.is_positive()
            && worst.is_none_or(|w| entry.regret > regrets[w].regret)
        {
            worst = Some(regrets.len());
        }
        regrets.push(entry);
    }
    let is_equilibrium = regrets.iter().all(|r| &r.regret <= epsilon);
    let worst = worst.map(|w| regrets[w].clone());
    Ok(NashReport {
        is_equilibrium,
        epsilon: epsilon.clone(),
        regrets,
        worst,
    })
}

/// Nash verdict for a global profile: every regret at most `epsilon`.
pub fn is_nash(
    game: &GraphicalGame,
    profile: &Profile,
    epsilon: &Rational,
) -> Result<NashReport, EquilibriumError> {
    require_global(game, profile)?;
    let players: Vec<PlayerId> = game.ids().collect();
    nash_report_over(game, profile, &players, epsilon)
}

fn all_zero_regret(game: &GraphicalGame, profile: &Profile) -> Result<bool, EquilibriumError> {
    for id in game.ids() {
        if !best_response_regret(game, profile, id)?.value.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every pure global profile with zero regret for all players, in
/// lexicographic order of action indices (player 0 most significant).
pub fn enumerate_pure_nash(
    game: &GraphicalGame,
    budget: &Budget,
) -> Result<Vec<Profile>, EquilibriumError> {
    let dims: Vec<usize> = game.ids().map(|id| game.action_count(id)).collect();
    budget.check(saturating_product(dims.iter().map(|&d| d as u128)))?;
    let mut found = Vec::new();
    for joint in JointActions::new(dims) {
        let profile = pure_profile_by_index(game, &joint.0)?;
        if all_zero_regret(game, &profile)? {
            found.push(profile);
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Player, UtilityTable};
    use crate::rational::{int, rat, zero};
    use crate::strategy::{pure_profile, MixedStrategy};

    fn binary() -> Vec<String> {
        vec!["T".into(), "F".into()]
    }

    fn coordination() -> GraphicalGame {
        let t = || UtilityTable::new(vec![2, 2], vec![int(1), int(0), int(0), int(1)]).unwrap();
        GraphicalGame::new(vec![
            Player {
                name: "a".into(),
                actions: binary(),
                neighbors: vec![PlayerId(1)],
                utility: t(),
            },
            Player {
                name: "b".into(),
                actions: binary(),
                neighbors: vec![PlayerId(0)],
                utility: t(),
            },
        ])
        .unwrap()
    }

    #[test]
    fn mismatch_has_regret_one() {
        let g = coordination();
        let x = pure_profile(&g, [(PlayerId(0), "T"), (PlayerId(1), "F")]).unwrap();
        let r = best_response_regret(&g, &x, PlayerId(0)).unwrap();
        assert_eq!(r.value, int(1));
        assert_eq!(r.witness, Some(1));
        let report = is_nash(&g, &x, &zero()).unwrap();
        assert!(!report.is_equilibrium);
        assert_eq!(report.worst.as_ref().unwrap().player, "a");
        assert_eq!(report.worst.unwrap().witness.as_deref(), Some("F"));
    }

    #[test]
    fn epsilon_relaxes_verdict() {
        let g = coordination();
        let x = Profile::empty(&g)
            .with(&g, PlayerId(0), MixedStrategy::binary(rat(1, 2)).unwrap())
            .unwrap()
            .with(&g, PlayerId(1), MixedStrategy::binary(rat(51, 100)).unwrap())
            .unwrap();
        assert!(!is_nash(&g, &x, &zero()).unwrap().is_equilibrium);
        assert!(is_nash(&g, &x, &rat(1, 50)).unwrap().is_equilibrium);
        assert!(is_nash(&g, &x, &rat(-1, 50)).is_err());
    }

    #[test]
    fn pure_equilibria_of_coordination() {
        let g = coordination();
        let all = enumerate_pure_nash(&g, &Budget::default()).unwrap();
        let picks: Vec<_> = all
            .iter()
            .map(|p| {
                (
                    p.get(PlayerId(0)).unwrap().pure_action(),
                    p.get(PlayerId(1)).unwrap().pure_action(),
                )
            })
            .collect();
        assert_eq!(picks, vec![(Some(0), Some(0)), (Some(1), Some(1))]);
        assert!(enumerate_pure_nash(&g, &Budget::new(3)).is_err());
    }

    #[test]
    fn single_player_argmax_rows() {
        let g = GraphicalGame::new(vec![Player {
            name: "solo".into(),
            actions: vec!["a".into(), "b".into(), "c".into()],
            neighbors: vec![],
            utility: UtilityTable::new(vec![3], vec![int(2), int(1), int(2)]).unwrap(),
        }])
        .unwrap();
        let all = enumerate_pure_nash(&g, &Budget::default()).unwrap();
        let rows: Vec<_> = all
            .iter()
            .map(|p| p.get(PlayerId(0)).unwrap().pure_action().unwrap())
            .collect();
        assert_eq!(rows, vec![0, 2]);
    }

    #[test]
    fn partial_profile_rejected_by_is_nash() {
        let g = coordination();
        let x = pure_profile(&g, [(PlayerId(0), "T")]).unwrap();
        assert!(matches!(
            is_nash(&g, &x, &zero()),
            Err(EquilibriumError::NotGlobal(_))
        ));
    }
}
