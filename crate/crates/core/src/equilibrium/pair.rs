//! Exact equilibrium sets of two mutually dependent binary players.

use num_traits::{One, Signed, Zero};

use super::{best_response_regret, EquilibriumError};
use crate::game::{GraphicalGame, PlayerId};
use crate::rational::Rational;
use crate::strategy::{expected_payoff, pure_profile_by_index_for, MixedStrategy, Profile};

/// Result of the support enumeration. `Continuum` is reported whenever the
/// equilibrium set contains a segment of positive length, in which case no
/// finite list describes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairEquilibria {
    Finite(Vec<Profile>),
    Continuum,
}

impl PairEquilibria {
    pub fn finite(&self) -> Option<&[Profile]> {
        match self {
            PairEquilibria::Finite(v) => Some(v),
            PairEquilibria::Continuum => None,
        }
    }
}

/// Gain of the first action over the second as a function of the opponent's
/// probability `t` of playing its first action: `at_one·t + at_zero·(1−t)`.
#[derive(Clone, Debug)]
struct Indifference {
    at_one: Rational,
    at_zero: Rational,
}

impl Indifference {
    fn eval(&self, t: &Rational) -> Rational {
        &self.at_one * t + &self.at_zero * (Rational::one() - t)
    }

    fn identically_zero(&self) -> bool {
        self.at_one.is_zero() && self.at_zero.is_zero()
    }

    /// Interior root in (0, 1), if any.
    fn interior_root(&self) -> Option<Rational> {
        let denom = &self.at_one - &self.at_zero;
        if denom.is_zero() {
            return None;
        }
        let t = -&self.at_zero / denom;
        (t.is_positive() && t < Rational::one()).then_some(t)
    }

    /// Whether the set of `t ∈ [0,1]` on which the first action (`first`) or
    /// the second action is a best response has positive length.
    fn best_on_interval(&self, first: bool) -> bool {
        let sign = |v: &Rational| if first { v.is_positive() } else { v.is_negative() };
        sign(&self.at_one) || sign(&self.at_zero)
    }
}

/// Complete exact equilibrium set of the two-player game formed by `pair`.
///
/// Both players must be binary and their neighbor sets must lie inside the
/// pair; use [`crate::strategy::condition_on`] first to freeze any outside
/// influence. Profiles are returned over the two players only, sorted by the
/// first player's then the second player's probability of its first action.
pub fn enumerate_equilibria_2x2(
    game: &GraphicalGame,
    pair: (PlayerId, PlayerId),
) -> Result<PairEquilibria, EquilibriumError> {
    let (a, b) = pair;
    if a == b {
        return Err(EquilibriumError::DegeneratePair);
    }
    for (me, other) in [(a, b), (b, a)] {
        let p = game.get(me)?;
        if p.actions.len() != 2 {
            return Err(EquilibriumError::NotBinary(p.name.clone()));
        }
        if p.neighbors.iter().any(|&n| n != other) {
            return Err(EquilibriumError::NotSelfContained(p.name.clone()));
        }
    }

    // u[i][j][k]: payoff of player k when a plays i and b plays j.
    let mut u = vec![vec![[Rational::zero(), Rational::zero()]; 2]; 2];
    for (i, row) in u.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let x = pure_profile_by_index_for(game, &[(a, i), (b, j)])?;
            cell[0] = expected_payoff(game, &x, a)?;
            cell[1] = expected_payoff(game, &x, b)?;
        }
    }
    // a's gain from action 0 over action 1, against b's first-action weight q.
    let da = Indifference {
        at_one: &u[0][0][0] - &u[1][0][0],
        at_zero: &u[0][1][0] - &u[1][1][0],
    };
    let db = Indifference {
        at_one: &u[0][0][1] - &u[0][1][1],
        at_zero: &u[1][0][1] - &u[1][1][1],
    };

    if da.identically_zero() || db.identically_zero() {
        return Ok(PairEquilibria::Continuum);
    }
    // A pure strategy that leaves the opponent indifferent yields a segment
    // whenever it is itself a best response on an interval.
    for (p_first, first) in [(Rational::one(), true), (Rational::zero(), false)] {
        if db.eval(&p_first).is_zero() && da.best_on_interval(first) {
            return Ok(PairEquilibria::Continuum);
        }
        if da.eval(&p_first).is_zero() && db.best_on_interval(first) {
            return Ok(PairEquilibria::Continuum);
        }
    }

    let mut ps = vec![Rational::zero(), Rational::one()];
    ps.extend(db.interior_root());
    let mut qs = vec![Rational::zero(), Rational::one()];
    qs.extend(da.interior_root());
    ps.sort();
    qs.sort();

    let mut found = Vec::new();
    for p in &ps {
        for q in &qs {
            let x = Profile::empty(game)
                .with(game, a, MixedStrategy::binary(p.clone())?)?
                .with(game, b, MixedStrategy::binary(q.clone())?)?;
            if best_response_regret(game, &x, a)?.value.is_zero()
                && best_response_regret(game, &x, b)?.value.is_zero()
            {
                found.push(x);
            }
        }
    }
    Ok(PairEquilibria::Finite(found))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Player, UtilityTable};
    use crate::rational::{int, rat};

    fn two(a: [i64; 4], b: [i64; 4]) -> GraphicalGame {
        let mk = |name: &str, other, v: [i64; 4]| Player {
            name: name.into(),
            actions: vec!["T".into(), "F".into()],
            neighbors: vec![other],
            utility: UtilityTable::new(vec![2, 2], v.iter().map(|&x| int(x)).collect()).unwrap(),
        };
        GraphicalGame::new(vec![mk("a", PlayerId(1), a), mk("b", PlayerId(0), b)]).unwrap()
    }

    fn points(r: &PairEquilibria) -> Vec<(Rational, Rational)> {
        r.finite()
            .unwrap()
            .iter()
            .map(|x| {
                (
                    x.get(PlayerId(0)).unwrap().prob(0).clone(),
                    x.get(PlayerId(1)).unwrap().prob(0).clone(),
                )
            })
            .collect()
    }

    #[test]
    fn coordination_has_three_equilibria() {
        let g = two([1, 0, 0, 1], [1, 0, 0, 1]);
        let r = enumerate_equilibria_2x2(&g, (PlayerId(0), PlayerId(1))).unwrap();
        assert_eq!(
            points(&r),
            vec![(int(0), int(0)), (rat(1, 2), rat(1, 2)), (int(1), int(1))]
        );
    }

    #[test]
    fn matching_pennies_is_uniform() {
        let g = two([1, -1, -1, 1], [-1, 1, 1, -1]);
        let r = enumerate_equilibria_2x2(&g, (PlayerId(0), PlayerId(1))).unwrap();
        assert_eq!(points(&r), vec![(rat(1, 2), rat(1, 2))]);
    }

    #[test]
    fn zero_tables_are_a_continuum() {
        let g = two([0; 4], [0; 4]);
        assert_eq!(
            enumerate_equilibria_2x2(&g, (PlayerId(0), PlayerId(1))).unwrap(),
            PairEquilibria::Continuum
        );
    }

    #[test]
    fn weak_dominance_segment_is_a_continuum() {
        // a strictly prefers T; b is indifferent when a plays T.
        let g = two([1, 1, 0, 0], [0, 1, 0, 0]);
        assert_eq!(
            enumerate_equilibria_2x2(&g, (PlayerId(0), PlayerId(1))).unwrap(),
            PairEquilibria::Continuum
        );
    }

    #[test]
    fn dominant_strategies_single_point() {
        // Prisoner's dilemma style: both strictly prefer F.
        let g = two([3, 0, 5, 1], [3, 0, 5, 1]);
        let r = enumerate_equilibria_2x2(&g, (PlayerId(0), PlayerId(1))).unwrap();
        assert_eq!(points(&r), vec![(int(0), int(0))]);
    }

    #[test]
    fn outside_dependency_rejected() {
        let mut players = two([1, 0, 0, 1], [1, 0, 0, 1]).players().to_vec();
        players.push(Player {
            name: "c".into(),
            actions: vec!["T".into(), "F".into()],
            neighbors: vec![],
            utility: UtilityTable::new(vec![2], vec![int(0), int(0)]).unwrap(),
        });
        players[0].neighbors.push(PlayerId(2));
        players[0].utility = UtilityTable::new(vec![2, 2, 2], vec![int(0); 8]).unwrap();
        let g = GraphicalGame::new(players).unwrap();
        assert!(matches!(
            enumerate_equilibria_2x2(&g, (PlayerId(0), PlayerId(1))),
            Err(EquilibriumError::NotSelfContained(_))
        ));
    }
}
