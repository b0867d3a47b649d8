//! Coalitional deviations and the bounded strong-equilibrium search.

use num_traits::Signed;
use serde::Serialize;

use super::{grid_size, grid_strategies, require_global, EquilibriumError};
use crate::budget::{saturating_product, Budget};
use crate::game::{GraphicalGame, JointActions, PlayerId};
use crate::rational::Rational;
use crate::strategy::{expected_payoff, payoff_vector, substitute, MixedStrategy, Profile};

/// A joint deviation `y ∈ St(K)` that strictly improves every member of `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationWitness {
    pub coalition: Vec<PlayerId>,
    /// Profile over the coalition only.
    pub deviation: Profile,
    /// `pay_p(x₋K[y]) − pay_p(x)` per member, all strictly positive.
    pub deltas: Vec<Rational>,
}

fn gains(
    game: &GraphicalGame,
    base: &[Rational],
    profile: &Profile,
    coalition: &[PlayerId],
    deviation: &Profile,
) -> Result<Option<Vec<Rational>>, EquilibriumError> {
    let moved = substitute(profile, deviation)?;
    let mut deltas = Vec::with_capacity(coalition.len());
    for &p in coalition {
        let d = expected_payoff(game, &moved, p)? - &base[p.0];
        if !d.is_positive() {
            return Ok(None);
        }
        deltas.push(d);
    }
    Ok(Some(deltas))
}

/// Checks one specific joint deviation of `coalition` (a profile covering at
/// least the coalition; only the coalition's strategies are used).
pub fn joint_deviation_witness(
    game: &GraphicalGame,
    profile: &Profile,
    coalition: &[PlayerId],
    deviation: &Profile,
) -> Result<Option<DeviationWitness>, EquilibriumError> {
    require_global(game, profile)?;
    let base = payoff_vector(game, profile)?;
    let deviation = crate::strategy::restrict(deviation, coalition)?;
    Ok(gains(game, &base, profile, coalition, &deviation)?.map(|deltas| DeviationWitness {
        coalition: coalition.to_vec(),
        deviation,
        deltas,
    }))
}

fn search_coalition(
    game: &GraphicalGame,
    profile: &Profile,
    base: &[Rational],
    coalition: &[PlayerId],
    options: &[Vec<MixedStrategy>],
) -> Result<Option<DeviationWitness>, EquilibriumError> {
    for pick in JointActions::new(options.iter().map(Vec::len).collect()) {
        let mut y = Profile::empty(game);
        for ((&p, opts), &i) in coalition.iter().zip(options).zip(&pick.0) {
            y.set(game, p, opts[i].clone())?;
        }
        if let Some(deltas) = gains(game, base, profile, coalition, &y)? {
            return Ok(Some(DeviationWitness {
                coalition: coalition.to_vec(),
                deviation: y,
                deltas,
            }));
        }
    }
    Ok(None)
}

fn pure_options(game: &GraphicalGame, coalition: &[PlayerId]) -> Vec<Vec<MixedStrategy>> {
    coalition
        .iter()
        .map(|&p| {
            let n = game.action_count(p);
            (0..n).map(|a| MixedStrategy::pure(n, a)).collect()
        })
        .collect()
}

/// First pure joint deviation (lexicographic in action indices) that strictly
/// improves every coalition member, if any. Sound only: `None` does not rule
/// out mixed joint deviations.
pub fn coalition_improvement_pure(
    game: &GraphicalGame,
    profile: &Profile,
    coalition: &[PlayerId],
    budget: &Budget,
) -> Result<Option<DeviationWitness>, EquilibriumError> {
    require_global(game, profile)?;
    budget.check(saturating_product(
        coalition.iter().map(|&p| game.action_count(p) as u128),
    ))?;
    let base = payoff_vector(game, profile)?;
    search_coalition(game, profile, &base, coalition, &pure_options(game, coalition))
}

/// Like [`coalition_improvement_pure`] over every joint deviation on the
/// `1/denominator` grid (which contains the pure ones).
pub fn coalition_improvement_grid(
    game: &GraphicalGame,
    profile: &Profile,
    coalition: &[PlayerId],
    denominator: u32,
    budget: &Budget,
) -> Result<Option<DeviationWitness>, EquilibriumError> {
    require_global(game, profile)?;
    if denominator == 0 {
        return Err(EquilibriumError::ZeroDenominator);
    }
    budget.check(grid_size(game, coalition, denominator))?;
    let base = payoff_vector(game, profile)?;
    let options: Vec<_> = coalition
        .iter()
        .map(|&p| grid_strategies(game.action_count(p), denominator))
        .collect();
    search_coalition(game, profile, &base, coalition, &options)
}

#[derive(Clone, Debug)]
pub struct StrongSearch {
    /// Coalitions of every size from 1 up to this bound are enumerated.
    pub max_coalition_size: usize,
    /// Search the `1/d` grid of joint deviations instead of pure ones only.
    pub grid_denominator: Option<u32>,
    /// Global profiles tried as deviations of the grand coalition.
    pub seeds: Vec<Profile>,
    pub budget: Budget,
}

impl Default for StrongSearch {
    fn default() -> Self {
        Self {
            max_coalition_size: 2,
            grid_denominator: None,
            seeds: Vec::new(),
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum StrongVerdict {
    Refuted,
    NoWitnessFound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongReport {
    pub verdict: StrongVerdict,
    pub witness: Option<DeviationWitness>,
    pub coalitions_examined: u64,
    pub deviations_examined: u128,
    /// Every player already receives the maximum entry of its table, so no
    /// deviation of any coalition can improve anyone: the absence of a
    /// witness is then a certificate.
    pub all_at_table_maximum: bool,
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Bounded search for a coalition deviation refuting strongness.
///
/// Coalitions are visited by size, then lexicographically; within each, pure
/// (or grid) joint deviations in lexicographic order. Seeds are tried last, as
/// grand-coalition deviations. `NoWitnessFound` is not a certificate unless
/// [`StrongReport::all_at_table_maximum`] holds.
pub fn strong_check_desk(
    game: &GraphicalGame,
    profile: &Profile,
    search: &StrongSearch,
) -> Result<StrongReport, EquilibriumError> {
    require_global(game, profile)?;
    let base = payoff_vector(game, profile)?;
    let n = game.num_players();
    let max_k = search.max_coalition_size.min(n);

    let per_player: Vec<Vec<MixedStrategy>> = game
        .ids()
        .map(|p| match search.grid_denominator {
            Some(d) if d > 0 => grid_strategies(game.action_count(p), d),
            Some(_) => Vec::new(),
            None => {
                let a = game.action_count(p);
                (0..a).map(|i| MixedStrategy::pure(a, i)).collect()
            }
        })
        .collect();
    if search.grid_denominator == Some(0) {
        return Err(EquilibriumError::ZeroDenominator);
    }

    let mut total: u128 = search.seeds.len() as u128;
    for k in 1..=max_k {
        combinations(n, k, |idx| {
            total = total.saturating_add(saturating_product(
                idx.iter().map(|&i| per_player[i].len() as u128),
            ));
            true
        });
    }
    search.budget.check(total)?;

    let all_at_table_maximum = game.ids().all(|p| {
        game.player(p)
            .utility
            .max()
            .is_some_and(|m| *m == base[p.0])
    });

    let mut coalitions_examined = 0u64;
    let mut deviations_examined = 0u128;
    let mut found: Option<DeviationWitness> = None;
    let mut failure: Option<EquilibriumError> = None;
    for k in 1..=max_k {
        combinations(n, k, |idx| {
            let coalition: Vec<PlayerId> = idx.iter().map(|&i| PlayerId(i)).collect();
            let options: Vec<Vec<MixedStrategy>> =
                idx.iter().map(|&i| per_player[i].clone()).collect();
            coalitions_examined += 1;
            deviations_examined += saturating_product(options.iter().map(|o| o.len() as u128));
            match search_coalition(game, profile, &base, &coalition, &options) {
                Ok(Some(w)) => {
                    found = Some(w);
                    false
                }
                Ok(None) => true,
                Err(e) => {
                    failure = Some(e);
                    false
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        if found.is_some() {
            break;
        }
    }

    if found.is_none() {
        let everyone: Vec<PlayerId> = game.ids().collect();
        for seed in &search.seeds {
            coalitions_examined += 1;
            deviations_examined += 1;
            let y = crate::strategy::restrict(seed, &everyone)?;
            if let Some(deltas) = gains(game, &base, profile, &everyone, &y)? {
                found = Some(DeviationWitness {
                    coalition: everyone.clone(),
                    deviation: y,
                    deltas,
                });
                break;
            }
        }
    }

    Ok(StrongReport {
        verdict: if found.is_some() {
            StrongVerdict::Refuted
        } else {
            StrongVerdict::NoWitnessFound
        },
        witness: found,
        coalitions_examined,
        deviations_examined,
        all_at_table_maximum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_enumerates_in_order() {
        let mut seen = Vec::new();
        combinations(4, 2, |c| {
            seen.push(c.to_vec());
            true
        });
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut count = 0;
        combinations(5, 5, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 1);
        combinations(2, 3, |_| panic!("k > n"));
        let mut first = None;
        combinations(6, 3, |c| {
            first = Some(c.to_vec());
            false
        });
        assert_eq!(first, Some(vec![0, 1, 2]));
    }
}
