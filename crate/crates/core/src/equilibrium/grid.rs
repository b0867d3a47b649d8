//! Finite grids of mixed profiles for desk-scale search.

use super::EquilibriumError;
use crate::budget::{saturating_product, Budget};
use crate::game::{GraphicalGame, JointActions, PlayerId};
use crate::rational::Rational;
use crate::strategy::{MixedStrategy, Profile};

/// All strategies over `actions` actions whose probabilities are multiples of
/// `1/denominator`, in lexicographic order of the numerators (first action's
/// numerator descending).
pub fn grid_strategies(actions: usize, denominator: u32) -> Vec<MixedStrategy> {
    fn compose(left: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            compose(left - k, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut numerators = Vec::new();
    compose(denominator, actions, &mut Vec::new(), &mut numerators);
    let d = i64::from(denominator);
    numerators
        .into_iter()
        .map(|ns| {
            MixedStrategy::new(
                ns.into_iter()
                    .map(|n| Rational::new(i64::from(n).into(), d.into()))
                    .collect(),
            )
            .expect("grid point is a distribution")
        })
        .collect()
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of grid profiles over `players`.
pub fn grid_size(game: &GraphicalGame, players: &[PlayerId], denominator: u32) -> u128 {
    saturating_product(players.iter().map(|&p| {
        let k = game.action_count(p) as u128;
        binomial(u128::from(denominator) + k - 1, k - 1)
    }))
}

/// Iterator over grid profiles; each profile's domain is exactly the chosen
/// players.
#[derive(Clone, Debug)]
pub struct GridProfiles<'g> {
    game: &'g GraphicalGame,
    players: Vec<PlayerId>,
    options: Vec<Vec<MixedStrategy>>,
    cursor: JointActions,
}

impl Iterator for GridProfiles<'_> {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        let pick = self.cursor.next()?;
        let mut profile = Profile::empty(self.game);
        for ((&player, options), &i) in self.players.iter().zip(&self.options).zip(&pick.0) {
            profile
                .set(self.game, player, options[i].clone())
                .expect("grid strategy sized to player");
        }
        Some(profile)
    }
}

/// Every global profile on the `1/denominator` grid, each exactly once.
pub fn grid_profiles<'g>(
    game: &'g GraphicalGame,
    denominator: u32,
    budget: &Budget,
) -> Result<GridProfiles<'g>, EquilibriumError> {
    let players: Vec<PlayerId> = game.ids().collect();
    grid_profiles_for(game, &players, denominator, budget)
}

/// Grid profiles over a subset of players.
pub fn grid_profiles_for<'g>(
    game: &'g GraphicalGame,
    players: &[PlayerId],
    denominator: u32,
    budget: &Budget,
) -> Result<GridProfiles<'g>, EquilibriumError> {
    if denominator == 0 {
        return Err(EquilibriumError::ZeroDenominator);
    }
    for &p in players {
        game.get(p)?;
    }
    budget.check(grid_size(game, players, denominator))?;
    let options: Vec<Vec<MixedStrategy>> = players
        .iter()
        .map(|&p| grid_strategies(game.action_count(p), denominator))
        .collect();
    let cursor = JointActions::new(options.iter().map(Vec::len).collect());
    Ok(GridProfiles {
        game,
        players: players.to_vec(),
        options,
        cursor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Player, UtilityTable};
    use crate::rational::int;
    use std::collections::HashSet;

    fn players(n: usize, actions: usize) -> GraphicalGame {
        GraphicalGame::new(
            (0..n)
                .map(|i| Player {
                    name: format!("p{i}"),
                    actions: (0..actions).map(|a| format!("a{a}")).collect(),
                    neighbors: vec![],
                    utility: UtilityTable::new(vec![actions], vec![int(0); actions]).unwrap(),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn counts() {
        let b = Budget::default();
        assert_eq!(grid_profiles(&players(1, 2), 2, &b).unwrap().count(), 3);
        assert_eq!(grid_profiles(&players(2, 2), 4, &b).unwrap().count(), 25);
        let three = players(1, 3);
        assert_eq!(grid_size(&three, &[PlayerId(0)], 3), 10);
        assert_eq!(grid_profiles(&three, 3, &b).unwrap().count(), 10);
    }

    #[test]
    fn denominator_one_is_pure() {
        let g = players(3, 2);
        let all: Vec<_> = grid_profiles(&g, 1, &Budget::default()).unwrap().collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(Profile::is_pure));
    }

    #[test]
    fn each_profile_once() {
        let g = players(2, 3);
        let all: Vec<_> = grid_profiles(&g, 3, &Budget::default()).unwrap().collect();
        let distinct: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), all.len());
    }

    #[test]
    fn budget_and_denominator_errors() {
        let g = players(4, 2);
        assert!(grid_profiles(&g, 0, &Budget::default()).is_err());
        assert!(grid_profiles(&g, 100, &Budget::new(1000)).is_err());
    }
}
