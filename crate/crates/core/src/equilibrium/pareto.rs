//! Pareto comparison among Nash equilibria and the desk-scale existence check
//! for another equilibrium.

use serde::Serialize;

use super::{is_nash, EquilibriumError};
use crate::game::{GraphicalGame, PlayerId};
use crate::rational::zero;
use crate::strategy::{payoff_vector, Profile};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParetoVerdict {
    pub pareto: bool,
    /// Index of the first candidate that Pareto-dominates the profile.
    pub dominating: Option<usize>,
}

/// `y` dominates `x`: every player strictly better off.
fn dominates(y: &[crate::Rational], x: &[crate::Rational]) -> bool {
    y.iter().zip(x).all(|(a, b)| a > b)
}

/// Decides whether `profile` is Pareto-optimal among the listed Nash
/// equilibria. The profile and every candidate must be exact Nash
/// equilibria; errors name the first offender.
pub fn is_pareto_within(
    game: &GraphicalGame,
    profile: &Profile,
    candidates: &[Profile],
) -> Result<ParetoVerdict, EquilibriumError> {
    if !is_nash(game, profile, &zero())?.is_equilibrium {
        return Err(EquilibriumError::ProfileNotNash);
    }
    let x = payoff_vector(game, profile)?;
    let mut dominating = None;
    for (i, y) in candidates.iter().enumerate() {
        if !is_nash(game, y, &zero())?.is_equilibrium {
            return Err(EquilibriumError::CandidateNotNash(i));
        }
        if dominating.is_none() && dominates(&payoff_vector(game, y)?, &x) {
            dominating = Some(i);
        }
    }
    Ok(ParetoVerdict {
        pareto: dominating.is_none(),
        dominating,
    })
}

/// Index of the first candidate Nash equilibrium that differs from `profile`
/// on some player in `players`. An empty player set asks for nothing and so
/// never succeeds.
pub fn another_nash_desk(
    game: &GraphicalGame,
    profile: &Profile,
    players: &[PlayerId],
    candidates: &[Profile],
) -> Result<Option<usize>, EquilibriumError> {
    if !is_nash(game, profile, &zero())?.is_equilibrium {
        return Err(EquilibriumError::ProfileNotNash);
    }
    for (i, y) in candidates.iter().enumerate() {
        if !is_nash(game, y, &zero())?.is_equilibrium {
            return Err(EquilibriumError::CandidateNotNash(i));
        }
    }
    for (i, y) in candidates.iter().enumerate() {
        let mut differs = false;
        for &p in players {
            let a = profile.strategy_of(game, p)?;
            let b = y.strategy_of(game, p)?;
            if a != b {
                differs = true;
                break;
            }
        }
        if differs {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Player, UtilityTable};
    use crate::rational::int;
    use crate::strategy::{pure_profile, MixedStrategy};

    fn coordination(high: i64) -> GraphicalGame {
        let mk = |name: &str, other| Player {
            name: name.into(),
            actions: vec!["T".into(), "F".into()],
            neighbors: vec![other],
            utility: UtilityTable::new(vec![2, 2], vec![int(high), int(0), int(0), int(1)])
                .unwrap(),
        };
        GraphicalGame::new(vec![mk("a", PlayerId(1)), mk("b", PlayerId(0))]).unwrap()
    }

    #[test]
    fn dominated_equilibrium_detected() {
        let g = coordination(2);
        let tt = pure_profile(&g, [(PlayerId(0), "T"), (PlayerId(1), "T")]).unwrap();
        let ff = pure_profile(&g, [(PlayerId(0), "F"), (PlayerId(1), "F")]).unwrap();
        let v = is_pareto_within(&g, &ff, &[ff.clone(), tt.clone()]).unwrap();
        assert_eq!(v.dominating, Some(1));
        assert!(!v.pareto);
        assert!(is_pareto_within(&g, &tt, &[ff.clone()]).unwrap().pareto);
        assert!(dominates(&[int(2), int(1)], &[int(1), int(0)]));
        // Weak improvement is not domination.
        assert!(!dominates(&[int(1), int(1)], &[int(1), int(0)]));
    }

    #[test]
    fn non_nash_inputs_rejected() {
        let g = coordination(2);
        let tf = pure_profile(&g, [(PlayerId(0), "T"), (PlayerId(1), "F")]).unwrap();
        let tt = pure_profile(&g, [(PlayerId(0), "T"), (PlayerId(1), "T")]).unwrap();
        assert!(matches!(
            is_pareto_within(&g, &tf, &[]),
            Err(EquilibriumError::ProfileNotNash)
        ));
        assert!(matches!(
            is_pareto_within(&g, &tt, &[tt.clone(), tf.clone()]),
            Err(EquilibriumError::CandidateNotNash(1))
        ));
    }

    #[test]
    fn another_equilibrium_on_subset() {
        let g = coordination(1);
        let tt = pure_profile(&g, [(PlayerId(0), "T"), (PlayerId(1), "T")]).unwrap();
        let half = Profile::empty(&g)
            .with(&g, PlayerId(0), MixedStrategy::uniform(2))
            .unwrap()
            .with(&g, PlayerId(1), MixedStrategy::uniform(2))
            .unwrap();
        assert_eq!(
            another_nash_desk(&g, &tt, &[PlayerId(0)], &[tt.clone(), half.clone()]).unwrap(),
            Some(1)
        );
        assert_eq!(another_nash_desk(&g, &tt, &[], &[half]).unwrap(), None);
        assert_eq!(another_nash_desk(&g, &tt, &[PlayerId(1)], &[tt.clone()]).unwrap(), None);
    }
}
