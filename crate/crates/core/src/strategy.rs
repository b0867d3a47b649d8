//! Mixed strategies, profiles, profile surgery and exact expected payoffs.

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::game::{GameError, GraphicalGame, JointActions, Player, PlayerId, UtilityTable};
use crate::rational::{RatString, Rational};

#[derive(Debug, thiserror::Error)]
pub enum StrategyError {
    #[error("strategy has no actions")]
    Empty,
    #[error("probability {0} outside [0, 1]")]
    OutOfRange(String),
    #[error("probabilities sum to {0}, not 1")]
    SumNotOne(String),
    #[error("strategy for {player:?} has {actual} probabilities, player has {expected} actions")]
    ActionCount {
        player: String,
        expected: usize,
        actual: usize,
    },
    #[error("profile does not cover player {0:?}")]
    MissingPlayer(String),
    #[error("player {0:?} is outside the profile domain")]
    OutsideDomain(String),
    #[error("profile sized for {profile} players, game has {game}")]
    GameMismatch { profile: usize, game: usize },
    #[error("strategy for {player:?} lacks action {action:?}")]
    MissingAction { player: String, action: String },
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Probability distribution over one player's actions, in action order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedStrategy(Vec<Rational>);

impl MixedStrategy {
    /// Rejects probabilities outside `[0, 1]` and sums other than exactly 1.
    pub fn new(probs: Vec<Rational>) -> Result<Self, StrategyError> {
        if probs.is_empty() {
            return Err(StrategyError::Empty);
        }
        let one = Rational::one();
        if let Some(p) = probs.iter().find(|p| **p < Rational::zero() || **p > one) {
            return Err(StrategyError::OutOfRange(p.to_string()));
        }
        let sum: Rational = probs.iter().sum();
        if sum != one {
            return Err(StrategyError::SumNotOne(sum.to_string()));
        }
        Ok(Self(probs))
    }

    pub fn pure(actions: usize, action: usize) -> Self {
        assert!(action < actions, "action {action} out of {actions}");
        Self(
            (0..actions)
                .map(|a| if a == action { Rational::one() } else { Rational::zero() })
                .collect(),
        )
    }

    pub fn uniform(actions: usize) -> Self {
        assert!(actions > 0);
        let p = Rational::new(1.into(), (actions as i64).into());
        Self(vec![p; actions])
    }

    /// Two-action strategy playing the first action with probability `first`.
    pub fn binary(first: Rational) -> Result<Self, StrategyError> {
        let second = Rational::one() - &first;
        Self::new(vec![first, second])
    }

    /// `lambda·y + (1 − lambda)·z`.
    pub fn mix(lambda: &Rational, y: &Self, z: &Self) -> Result<Self, StrategyError> {
        if y.len() != z.len() {
            return Err(StrategyError::ActionCount {
                player: String::new(),
                expected: y.len(),
                actual: z.len(),
            });
        }
        let rest = Rational::one() - lambda;
        Self::new(
            y.0.iter()
                .zip(&z.0)
                .map(|(a, b)| lambda * a + &rest * b)
                .collect(),
        )
    }

    pub fn probs(&self) -> &[Rational] {
        &self.0
    }

    pub fn prob(&self, action: usize) -> &Rational {
        &self.0[action]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pure_action(&self) -> Option<usize> {
        self.0.iter().position(|p| p.is_one())
    }

    pub fn is_uniform(&self) -> bool {
        let u = Rational::new(1.into(), (self.0.len() as i64).into());
        self.0.iter().all(|p| *p == u)
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.0.iter().enumerate().filter(|(_, p)| !p.is_zero())
    }
}

/// One strategy per covered player. Sized to a specific game; the domain is
/// the set of filled slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    slots: Vec<Option<MixedStrategy>>,
}

impl Profile {
    pub fn empty(game: &GraphicalGame) -> Self {
        Self {
            slots: vec![None; game.num_players()],
        }
    }

    pub fn set(
        &mut self,
        game: &GraphicalGame,
        player: PlayerId,
        strategy: MixedStrategy,
    ) -> Result<(), StrategyError> {
        self.check_game(game)?;
        let p = game.get(player)?;
        if p.actions.len() != strategy.len() {
            return Err(StrategyError::ActionCount {
                player: p.name.clone(),
                expected: p.actions.len(),
                actual: strategy.len(),
            });
        }
        self.slots[player.0] = Some(strategy);
        Ok(())
    }

    pub fn with(
        mut self,
        game: &GraphicalGame,
        player: PlayerId,
        strategy: MixedStrategy,
    ) -> Result<Self, StrategyError> {
        self.set(game, player, strategy)?;
        Ok(self)
    }

    pub fn get(&self, player: PlayerId) -> Option<&MixedStrategy> {
        self.slots.get(player.0).and_then(Option::as_ref)
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.iter().all(Option::is_none)
    }

    pub fn domain(&self) -> Vec<PlayerId> {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .map(|(i, _)| PlayerId(i))
            .collect()
    }

    pub fn covers(&self, player: PlayerId) -> bool {
        self.get(player).is_some()
    }

    pub fn is_global(&self) -> bool {
        self.slots.iter().all(Option::is_some)
    }

    pub fn is_pure(&self) -> bool {
        self.slots
            .iter()
            .flatten()
            .all(|s| s.pure_action().is_some())
    }

    pub(crate) fn check_game(&self, game: &GraphicalGame) -> Result<(), StrategyError> {
        if self.slots.len() != game.num_players() {
            return Err(StrategyError::GameMismatch {
                profile: self.slots.len(),
                game: game.num_players(),
            });
        }
        Ok(())
    }

    pub(crate) fn strategy_of(
        &self,
        game: &GraphicalGame,
        player: PlayerId,
    ) -> Result<&MixedStrategy, StrategyError> {
        self.get(player)
            .ok_or_else(|| StrategyError::MissingPlayer(game.name(player).to_string()))
    }

    pub fn from_doc(game: &GraphicalGame, doc: &ProfileDoc) -> Result<Self, StrategyError> {
        let mut profile = Self::empty(game);
        for (name, probs) in &doc.strategies {
            let id = game.require(name)?;
            let p = game.player(id);
            let values = p
                .actions
                .iter()
                .map(|a| {
                    probs
                        .get(a)
                        .map(|r| r.0.clone())
                        .ok_or_else(|| StrategyError::MissingAction {
                            player: name.clone(),
                            action: a.clone(),
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(extra) = probs.keys().find(|k| p.action_index(k).is_none()) {
                return Err(GameError::UnknownAction {
                    player: name.clone(),
                    action: extra.clone(),
                }
                .into());
            }
            profile.set(game, id, MixedStrategy::new(values)?)?;
        }
        Ok(profile)
    }

    pub fn to_doc(&self, game: &GraphicalGame) -> ProfileDoc {
        let strategies = self
            .slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().map(|s| (PlayerId(i), s)))
            .map(|(id, s)| {
                let p = game.player(id);
                let probs = p
                    .actions
                    .iter()
                    .zip(s.probs())
                    .map(|(a, v)| (a.clone(), RatString(v.clone())))
                    .collect();
                (p.name.clone(), probs)
            })
            .collect();
        ProfileDoc { strategies }
    }
}

/// JSON profile document: `{"strategies":{"<player>":{"<action>":"num/den"}}}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProfileDoc {
    pub strategies: IndexMap<String, IndexMap<String, RatString>>,
}

/// `profile` with every strategy of `replacement` swapped in (`x₋K[y]`).
pub fn substitute(profile: &Profile, replacement: &Profile) -> Result<Profile, StrategyError> {
    if profile.len() != replacement.len() {
        return Err(StrategyError::GameMismatch {
            profile: replacement.len(),
            game: profile.len(),
        });
    }
    let mut out = profile.clone();
    for (i, slot) in replacement.slots.iter().enumerate() {
        if let Some(s) = slot {
            if out.slots[i].is_none() {
                return Err(StrategyError::OutsideDomain(format!("#{i}")));
            }
            out.slots[i] = Some(s.clone());
        }
    }
    Ok(out)
}

/// Projection of `profile` onto `players`.
pub fn restrict(profile: &Profile, players: &[PlayerId]) -> Result<Profile, StrategyError> {
    let mut out = Profile {
        slots: vec![None; profile.len()],
    };
    for &p in players {
        let s = profile
            .get(p)
            .ok_or_else(|| StrategyError::MissingPlayer(p.to_string()))?;
        out.slots[p.0] = Some(s.clone());
    }
    Ok(out)
}

/// Profile in which each chosen player plays the named action with
/// probability 1. Players absent from `choice` stay outside the domain.
pub fn pure_profile<S: AsRef<str>>(
    game: &GraphicalGame,
    choice: impl IntoIterator<Item = (PlayerId, S)>,
) -> Result<Profile, StrategyError> {
    let mut profile = Profile::empty(game);
    for (player, action) in choice {
        let a = game.action_index(player, action.as_ref())?;
        profile.set(game, player, MixedStrategy::pure(game.action_count(player), a))?;
    }
    Ok(profile)
}

/// Pure profile from action indices, one per player in id order.
pub fn pure_profile_by_index(
    game: &GraphicalGame,
    actions: &[usize],
) -> Result<Profile, StrategyError> {
    let mut profile = Profile::empty(game);
    for (id, &a) in game.ids().zip(actions) {
        let n = game.action_count(id);
        if a >= n {
            return Err(GameError::UnknownAction {
                player: game.name(id).to_string(),
                action: format!("#{a}"),
            }
            .into());
        }
        profile.set(game, id, MixedStrategy::pure(n, a))?;
    }
    Ok(profile)
}

/// Pure profile over the listed players only.
pub fn pure_profile_by_index_for(
    game: &GraphicalGame,
    actions: &[(PlayerId, usize)],
) -> Result<Profile, StrategyError> {
    let mut profile = Profile::empty(game);
    for &(id, a) in actions {
        let n = game.get(id)?.actions.len();
        if a >= n {
            return Err(GameError::UnknownAction {
                player: game.name(id).to_string(),
                action: format!("#{a}"),
            }
            .into());
        }
        profile.set(game, id, MixedStrategy::pure(n, a))?;
    }
    Ok(profile)
}

/// Expected payoff split by the owner's pure actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayoffBreakdown {
    /// `pay_i(x₋ᵢ[a])` for each own action `a`.
    pub per_action: Vec<Rational>,
    /// `pay_i(x)`.
    pub value: Rational,
    /// Utility-table entries read while evaluating.
    pub entries_touched: usize,
}

/// Evaluates `player`'s payoff against every own pure action in a single pass
/// over the support of the neighbors' strategies.
pub fn payoff_breakdown(
    game: &GraphicalGame,
    profile: &Profile,
    player: PlayerId,
) -> Result<PayoffBreakdown, StrategyError> {
    profile.check_game(game)?;
    let p = game.get(player)?;
    let own = profile.strategy_of(game, player)?;
    let supports = neighbor_supports(game, profile, p)?;
    let table = &p.utility;
    let (scale, scaled) = table.scaled();
    let own_actions = p.actions.len();

    // Each neighbor's probabilities as integers over a common denominator, so
    // the whole sum is integer arithmetic with one reduction per action.
    let mut denom = scale.clone();
    let int_supports: Vec<Vec<(usize, BigInt)>> = supports
        .iter()
        .map(|support| {
            let d = support
                .iter()
                .fold(BigInt::one(), |acc, (_, prob)| acc.lcm(prob.denom()));
            let ints = support
                .iter()
                .map(|&(a, prob)| (a, prob.numer() * (&d / prob.denom())))
                .collect();
            denom *= d;
            ints
        })
        .collect();

    let mut sums = vec![BigInt::zero(); own_actions];
    let mut touched = 0;
    let walk = Walk {
        dims: table.dims(),
        stride: table.stride(),
        scaled,
        supports: &int_supports,
    };
    walk.run(0, 0, &BigInt::one(), &mut sums, &mut touched);
    let per_action: Vec<Rational> = sums
        .into_iter()
        .map(|s| Rational::new(s, denom.clone()))
        .collect();

    let value = own
        .support()
        .map(|(a, prob)| prob * &per_action[a])
        .sum();
    Ok(PayoffBreakdown {
        per_action,
        value,
        entries_touched: touched,
    })
}

struct Walk<'a> {
    dims: &'a [usize],
    stride: usize,
    scaled: &'a [BigInt],
    supports: &'a [Vec<(usize, BigInt)>],
}

impl Walk<'_> {
    fn run(&self, depth: usize, offset: usize, weight: &BigInt, sums: &mut [BigInt], touched: &mut usize) {
        if depth == self.supports.len() {
            for (a, acc) in sums.iter_mut().enumerate() {
                *acc += weight * &self.scaled[a * self.stride + offset];
            }
            *touched += sums.len();
            return;
        }
        for (action, w) in &self.supports[depth] {
            let next = offset * self.dims[depth + 1] + action;
            self.run(depth + 1, next, &(weight * w), sums, touched);
        }
    }
}

fn neighbor_supports<'a>(
    game: &GraphicalGame,
    profile: &'a Profile,
    p: &Player,
) -> Result<Vec<Vec<(usize, &'a Rational)>>, StrategyError> {
    p.neighbors
        .iter()
        .map(|&n| {
            let s = profile.strategy_of(game, n)?;
            if s.len() != game.action_count(n) {
                return Err(StrategyError::ActionCount {
                    player: game.name(n).to_string(),
                    expected: game.action_count(n),
                    actual: s.len(),
                });
            }
            Ok(s.support().collect())
        })
        .collect()
}

/// `pay_i(x) = E_x[u_i]`, exact. `profile` must cover the player and all of
/// its neighbors.
pub fn expected_payoff(
    game: &GraphicalGame,
    profile: &Profile,
    player: PlayerId,
) -> Result<Rational, StrategyError> {
    payoff_breakdown(game, profile, player).map(|b| b.value)
}

/// Payoffs of every player, in id order. Requires a global profile.
pub fn payoff_vector(
    game: &GraphicalGame,
    profile: &Profile,
) -> Result<Vec<Rational>, StrategyError> {
    game.ids()
        .map(|id| expected_payoff(game, profile, id))
        .collect()
}

/// The game over `keep` in which every other neighbor is replaced by its
/// fixed strategy in `context`. Tables of kept players are the exact
/// expectations over the context players, so payoffs coincide with the
/// original game whenever the context strategies are played.
pub fn condition_on(
    game: &GraphicalGame,
    keep: &[PlayerId],
    context: &Profile,
) -> Result<GraphicalGame, StrategyError> {
    context.check_game(game)?;
    let position = |id: PlayerId| keep.iter().position(|&k| k == id);
    let mut players = Vec::with_capacity(keep.len());
    for &id in keep {
        let p = game.get(id)?;
        // Axis positions (1-based) of kept and context neighbors.
        let mut kept_axes = Vec::new();
        let mut fixed_axes = Vec::new();
        let mut neighbors = Vec::new();
        for (k, &n) in p.neighbors.iter().enumerate() {
            match position(n) {
                Some(j) => {
                    kept_axes.push(k + 1);
                    neighbors.push(PlayerId(j));
                }
                None => fixed_axes.push((k + 1, context.strategy_of(game, n)?)),
            }
        }
        let dims: Vec<usize> = std::iter::once(p.actions.len())
            .chain(kept_axes.iter().map(|&ax| p.utility.dims()[ax]))
            .collect();
        let fixed_dims: Vec<usize> = fixed_axes.iter().map(|(ax, _)| p.utility.dims()[*ax]).collect();
        let mut full = vec![0; p.utility.dims().len()];
        let utility = UtilityTable::from_fn(dims, |joint| {
            full[0] = joint[0];
            for (slot, &ax) in kept_axes.iter().enumerate() {
                full[ax] = joint[slot + 1];
            }
            let mut total = Rational::zero();
            for fixed in JointActions::new(fixed_dims.clone()) {
                let mut weight = Rational::one();
                for ((ax, s), &a) in fixed_axes.iter().zip(&fixed.0) {
                    full[*ax] = a;
                    weight *= s.prob(a);
                }
                if !weight.is_zero() {
                    total += weight * p.utility.get(&full);
                }
            }
            total
        });
        players.push(Player {
            name: p.name.clone(),
            actions: p.actions.clone(),
            neighbors,
            utility,
        });
    }
    Ok(GraphicalGame::new(players)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{GameDef, PlayerDef};
    use crate::rational::{int, rat};

    /// Two-player coordination game (match → 1, mismatch → 0).
    pub(crate) fn coordination() -> GraphicalGame {
        let table = |_: &str| {
            [("T,T", 1), ("T,F", 0), ("F,T", 0), ("F,F", 1)]
                .iter()
                .map(|(k, v)| (k.to_string(), RatString(int(*v))))
                .collect()
        };
        GraphicalGame::from_def(&GameDef {
            players: vec![
                PlayerDef {
                    id: "a".into(),
                    actions: vec!["T".into(), "F".into()],
                    neighbors: vec!["b".into()],
                    utility: table("a"),
                },
                PlayerDef {
                    id: "b".into(),
                    actions: vec!["T".into(), "F".into()],
                    neighbors: vec!["a".into()],
                    utility: table("b"),
                },
            ],
        })
        .unwrap()
    }

    #[test]
    fn strategy_validation() {
        assert!(MixedStrategy::new(vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(MixedStrategy::new(vec![rat(3, 2), rat(-1, 2)]).is_err());
        assert!(MixedStrategy::new(vec![]).is_err());
        let s = MixedStrategy::new(vec![rat(1, 3), rat(2, 3)]).unwrap();
        assert_eq!(s.pure_action(), None);
        assert!(MixedStrategy::uniform(3).is_uniform());
        assert_eq!(MixedStrategy::pure(2, 1).pure_action(), Some(1));
    }

    #[test]
    fn pure_payoff_matches_table_entry() {
        let g = coordination();
        let x = pure_profile(&g, [(PlayerId(0), "T"), (PlayerId(1), "F")]).unwrap();
        assert_eq!(expected_payoff(&g, &x, PlayerId(0)).unwrap(), int(0));
        let y = pure_profile(&g, [(PlayerId(0), "F"), (PlayerId(1), "F")]).unwrap();
        assert_eq!(expected_payoff(&g, &y, PlayerId(1)).unwrap(), int(1));
        assert!(pure_profile(&g, [(PlayerId(0), "maybe")]).is_err());
    }

    #[test]
    fn mixed_payoff_and_breakdown() {
        let g = coordination();
        let half = MixedStrategy::binary(rat(1, 2)).unwrap();
        let x = Profile::empty(&g)
            .with(&g, PlayerId(0), half.clone())
            .unwrap()
            .with(&g, PlayerId(1), half)
            .unwrap();
        let b = payoff_breakdown(&g, &x, PlayerId(0)).unwrap();
        assert_eq!(b.value, rat(1, 2));
        assert_eq!(b.per_action, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(b.entries_touched, 4);
    }

    #[test]
    fn missing_coverage_is_an_error() {
        let g = coordination();
        let x = pure_profile(&g, [(PlayerId(0), "T")]).unwrap();
        assert!(matches!(
            expected_payoff(&g, &x, PlayerId(0)),
            Err(StrategyError::MissingPlayer(_))
        ));
    }

    #[test]
    fn surgery() {
        let g = coordination();
        let x = pure_profile(&g, [(PlayerId(0), "T"), (PlayerId(1), "T")]).unwrap();
        assert_eq!(substitute(&x, &restrict(&x, &[PlayerId(1)]).unwrap()).unwrap(), x);
        let y = pure_profile(&g, [(PlayerId(1), "F")]).unwrap();
        let z = substitute(&x, &y).unwrap();
        assert_eq!(z.get(PlayerId(0)), x.get(PlayerId(0)));
        assert_eq!(z.get(PlayerId(1)).unwrap().pure_action(), Some(1));
        let all = pure_profile(&g, [(PlayerId(0), "F"), (PlayerId(1), "F")]).unwrap();
        assert_eq!(substitute(&x, &all).unwrap(), all);
        assert_eq!(restrict(&x, &x.domain()).unwrap(), x);
        let partial = pure_profile(&g, [(PlayerId(0), "T")]).unwrap();
        assert!(substitute(&partial, &y).is_err());
        assert!(restrict(&partial, &[PlayerId(1)]).is_err());
    }

    #[test]
    fn empty_choice_gives_empty_profile() {
        let g = GraphicalGame::new(vec![]).unwrap();
        let x = pure_profile::<&str>(&g, []).unwrap();
        assert!(x.is_global() && x.domain().is_empty());
    }

    #[test]
    fn doc_round_trip() {
        let g = coordination();
        let x = Profile::empty(&g)
            .with(&g, PlayerId(0), MixedStrategy::binary(rat(1, 3)).unwrap())
            .unwrap()
            .with(&g, PlayerId(1), MixedStrategy::pure(2, 0))
            .unwrap();
        let text = serde_json::to_string(&x.to_doc(&g)).unwrap();
        assert_eq!(
            text,
            r#"{"strategies":{"a":{"T":"1/3","F":"2/3"},"b":{"T":"1/1","F":"0/1"}}}"#
        );
        let doc: ProfileDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(Profile::from_doc(&g, &doc).unwrap(), x);
    }

    #[test]
    fn conditioning_fixes_context() {
        let g = coordination();
        let ctx = pure_profile(&g, [(PlayerId(1), "F")]).unwrap();
        let slice = condition_on(&g, &[PlayerId(0)], &ctx).unwrap();
        assert_eq!(slice.num_players(), 1);
        assert_eq!(slice.player(PlayerId(0)).utility.entries(), &[int(0), int(1)]);
    }
}
