//! Desk-scale validators for the gadget constructions.
//!
//! Existence questions over the continuum of mixed profiles are replaced by
//! enumeration of the `2ⁿ` canonical profiles: the variable gadget forces
//! every `xᵢ` to a pure action at equilibrium, and clause, tree and root
//! players then have unique best responses. Grid scans are kept as an extra
//! refutation net; their bounds are part of each report.

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::sat::{bits_satisfy, sat_brute_force, SatBoundExceeded};
use crate::budget::Budget;
use crate::equilibrium::{
    another_nash_desk, best_response_regret, check_constrained, coalition_improvement_pure,
    enumerate_equilibria_2x2, grid_profiles, is_nash, is_pareto_within, non_random_satisfied,
    strong_check_desk, EquilibriumError, PairEquilibria, StrongSearch, StrongVerdict,
};
use crate::game::{GameDef, GameError, GraphicalGame, PlayerId};
use crate::rational::{int, rat, Rational};
use crate::reduction::{
    build_action_constrained_instance, build_another_nash_instance, build_gamma_scaled,
    build_gphi, build_payoff_constrained_instance, canonical_profile, CnfFormula, FEncoding,
    ReductionArtifacts, ReductionError, TruthAssignment, VariableGadget,
};
use crate::strategy::{
    condition_on, expected_payoff, payoff_breakdown, payoff_vector, MixedStrategy, Profile,
    ProfileDoc, StrategyError,
};

/// Largest padded variable count for which canonical profiles are enumerated.
pub const MAX_CANONICAL_VARS: usize = 12;

pub const ENCODINGS: [FEncoding; 2] = [FEncoding::S2ForFalse, FEncoding::S3ForFalse];

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Sat(#[from] SatBoundExceeded),
    #[error("padded formula has {num_vars} variables, canonical enumeration is bounded by {bound}")]
    TooManyVariables { num_vars: usize, bound: usize },
}

/// A game and profile that can be replayed through `verify`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub reason: String,
    pub game: GameDef,
    pub profile: ProfileDoc,
}

impl Counterexample {
    pub fn new(reason: impl Into<String>, game: &GraphicalGame, profile: &Profile) -> Self {
        Self {
            reason: reason.into(),
            game: game.to_def(),
            profile: profile.to_doc(game),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceOutcome {
    /// SHA-256 of the input formula in DIMACS form.
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub passed: bool,
    /// Individual facts checked on this instance.
    pub cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub instances: Vec<InstanceOutcome>,
    /// Present whenever some instance failed (the first failure).
    pub counterexample: Option<Counterexample>,
    pub notes: Vec<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.instances.iter().all(|i| i.passed)
    }

    pub fn instances_checked(&self) -> usize {
        self.instances.len()
    }

    pub fn failures(&self) -> usize {
        self.instances.iter().filter(|i| !i.passed).count()
    }

    pub fn with_label(mut self, label: &str) -> Self {
        for i in &mut self.instances {
            i.label = Some(label.to_string());
        }
        self
    }

    /// Merges another report for the same lemma.
    pub fn absorb(&mut self, other: LemmaReport) {
        self.instances.extend(other.instances);
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
        for note in other.notes {
            if !self.notes.contains(&note) {
                self.notes.push(note);
            }
        }
    }
}

pub fn instance_hash(cnf: &CnfFormula) -> String {
    hex::encode(Sha256::digest(cnf.to_dimacs().as_bytes()))
}

/// Accumulates checks for one instance; keeps the first failure.
struct Tally {
    cases: u64,
    failure: Option<Counterexample>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            cases: 0,
            failure: None,
            notes: Vec::new(),
        }
    }

    fn check(
        &mut self,
        ok: bool,
        game: &GraphicalGame,
        profile: &Profile,
        reason: impl FnOnce() -> String,
    ) -> bool {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(Counterexample::new(reason(), game, profile));
        }
        ok
    }

    fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    fn finish(self, lemma: &str, cnf: &CnfFormula) -> LemmaReport {
        let passed = self.failure.is_none();
        LemmaReport {
            lemma: lemma.to_string(),
            instances: vec![InstanceOutcome {
                instance: instance_hash(cnf),
                label: None,
                passed,
                cases: self.cases,
                failure: self.failure.as_ref().map(|c| c.reason.clone()),
            }],
            counterexample: self.failure,
            notes: self.notes,
        }
    }
}

fn bounded(art: &ReductionArtifacts) -> Result<usize, OracleError> {
    let n = art.cnf.num_vars();
    if n > MAX_CANONICAL_VARS {
        return Err(OracleError::TooManyVariables {
            num_vars: n,
            bound: MAX_CANONICAL_VARS,
        });
    }
    Ok(n)
}

fn plays_true(x: &Profile, p: PlayerId) -> bool {
    x.get(p).is_some_and(|s| s.prob(0).is_one())
}

fn pair_points(found: &[Profile], a: PlayerId, b: PlayerId) -> Vec<(Rational, Rational)> {
    found
        .iter()
        .map(|x| {
            (
                x.get(a).expect("pair profile").prob(0).clone(),
                x.get(b).expect("pair profile").prob(0).clone(),
            )
        })
        .collect()
}

/// `xᵢ`'s best response and payoff against one `x′`/`x″` equilibrium.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetContext {
    pub label: &'static str,
    /// Probability with which both `x′` and `x″` play T.
    pub pair_true: Rational,
    pub best_action: String,
    pub payoff: Rational,
    pub unique: bool,
}

/// Evaluates `xᵢ` in the contexts s₁ (both F), s₂ (both T) and s₃ (both ½).
pub fn gadget_contexts(
    game: &GraphicalGame,
    gadget: &VariableGadget,
) -> Result<Vec<GadgetContext>, OracleError> {
    let mut out = Vec::with_capacity(3);
    for (label, q) in [("s1", int(0)), ("s2", int(1)), ("s3", rat(1, 2))] {
        let pair = MixedStrategy::binary(q.clone())?;
        let x = Profile::empty(game)
            .with(game, gadget.x, MixedStrategy::uniform(2))?
            .with(game, gadget.x_prime, pair.clone())?
            .with(game, gadget.x_double_prime, pair)?;
        let b = payoff_breakdown(game, &x, gadget.x)?;
        let (t, f) = (&b.per_action[0], &b.per_action[1]);
        let best = usize::from(f > t);
        out.push(GadgetContext {
            label,
            pair_true: q,
            best_action: game.player(gadget.x).actions[best].clone(),
            payoff: b.per_action[best].clone(),
            unique: t != f,
        });
    }
    Ok(out)
}

/// Grid profiles whose regrets are all below `epsilon` but which lie farther
/// than `1/denominator` (max-norm over all probabilities) from every profile
/// in `known`.
pub fn stray_equilibria(
    game: &GraphicalGame,
    denominator: u32,
    epsilon: &Rational,
    known: &[Profile],
    budget: &Budget,
) -> Result<Vec<Profile>, OracleError> {
    let radius = rat(1, i64::from(denominator));
    let near = |x: &Profile, y: &Profile| {
        game.ids().all(|p| {
            let (a, b) = (x.get(p).expect("global"), y.get(p).expect("global"));
            a.probs()
                .iter()
                .zip(b.probs())
                .all(|(u, v)| num_traits::Signed::abs(&(u - v)) <= radius)
        })
    };
    let mut strays = Vec::new();
    for x in grid_profiles(game, denominator, budget)? {
        let mut small = true;
        for p in game.ids() {
            if best_response_regret(game, &x, p)?.value >= *epsilon {
                small = false;
                break;
            }
        }
        if small && !known.iter().any(|k| near(&x, k)) {
            strays.push(x);
        }
    }
    Ok(strays)
}

/// The variable gadget: the `x′`/`x″` pair has exactly the equilibria
/// both-F, both-T and both-½; `xᵢ` responds purely (T, F, F) with payoffs
/// 1, 2 and 1/4; a grid scan of the three-player gadget at `grid_denominator`
/// finds no other approximate equilibrium.
pub fn validate_variable_gadget(
    art: &ReductionArtifacts,
    grid_denominator: u32,
) -> Result<LemmaReport, OracleError> {
    let mut tally = Tally::new();
    let game = &art.game;
    let eps = rat(1, 10_000);
    let half = rat(1, 2);
    let expected_pair = vec![
        (int(0), int(0)),
        (half.clone(), half.clone()),
        (int(1), int(1)),
    ];
    let expected_ctx = [("T", int(1)), ("F", int(2)), ("F", rat(1, 4))];

    for (i, g) in art.var_map.iter().enumerate() {
        let var = i + 1;
        let pair_game = game.subgame(&[g.x_prime, g.x_double_prime])?;
        let eq = enumerate_equilibria_2x2(&pair_game, (PlayerId(0), PlayerId(1)))?;
        let points = eq
            .finite()
            .map(|f| pair_points(f, PlayerId(0), PlayerId(1)));
        let witness = match &eq {
            PairEquilibria::Finite(f) if !f.is_empty() => f[0].clone(),
            _ => Profile::empty(&pair_game)
                .with(&pair_game, PlayerId(0), MixedStrategy::uniform(2))?
                .with(&pair_game, PlayerId(1), MixedStrategy::uniform(2))?,
        };
        tally.check(
            points.as_ref() == Some(&expected_pair),
            &pair_game,
            &witness,
            || format!("x{var}' / x{var}'' equilibrium set is {eq:?}"),
        );

        let ctx = gadget_contexts(game, g)?;
        for (c, (action, payoff)) in ctx.iter().zip(&expected_ctx) {
            let x = canonical_gadget(game, g, c)?;
            tally.check(
                c.unique && c.best_action == *action && c.payoff == *payoff,
                game,
                &x,
                || {
                    format!(
                        "x{var} in context {}: best response {} with payoff {}",
                        c.label, c.best_action, c.payoff
                    )
                },
            );
        }

        let gadget = game.subgame(&[g.x, g.x_prime, g.x_double_prime])?;
        let known = ctx
            .iter()
            .map(|c| canonical_gadget(&gadget, &VariableGadget {
                x: PlayerId(0),
                x_prime: PlayerId(1),
                x_double_prime: PlayerId(2),
            }, c))
            .collect::<Result<Vec<_>, _>>()?;
        for k in &known {
            let nash = is_nash(&gadget, k, &Rational::zero())?.is_equilibrium;
            tally.check(nash, &gadget, k, || {
                format!("x{var} gadget context is not an equilibrium")
            });
        }
        let strays = stray_equilibria(&gadget, grid_denominator, &eps, &known, &Budget::default())?;
        let first = strays.first().cloned().unwrap_or_else(|| known[0].clone());
        tally.check(strays.is_empty(), &gadget, &first, || {
            format!(
                "{} stray approximate equilibria of the x{var} gadget at grid 1/{grid_denominator}",
                strays.len()
            )
        });
    }
    tally.note(format!(
        "gadget grid scan: denominator {grid_denominator}, regret threshold 1/10000"
    ));
    tally.note("s3 context: x_i payoff computed exactly as 1/4");
    Ok(tally.finish("variable-gadget", &art.cnf))
}

/// Gadget profile where `xᵢ` plays its best response to the context.
fn canonical_gadget(
    game: &GraphicalGame,
    g: &VariableGadget,
    c: &GadgetContext,
) -> Result<Profile, OracleError> {
    let pair = MixedStrategy::binary(c.pair_true.clone())?;
    let best = game.action_index(g.x, &c.best_action)?;
    Ok(Profile::empty(game)
        .with(game, g.x, MixedStrategy::pure(2, best))?
        .with(game, g.x_prime, pair.clone())?
        .with(game, g.x_double_prime, pair)?)
}

/// Canonical profiles are Nash; `E` plays T in the canonical profile of σ
/// iff σ satisfies the formula; some canonical profile has `E` playing T iff
/// brute force finds a model.
pub fn validate_sat_equivalence(cnf: &CnfFormula) -> Result<LemmaReport, OracleError> {
    let art = build_gphi(cnf)?;
    let n = bounded(&art)?;
    let model = sat_brute_force(cnf)?;
    let game = &art.game;
    let e = art.root();
    let mut tally = Tally::new();
    let mut witness: Option<Profile> = None;
    let mut any_true = false;

    for k in 0..1u64 << n {
        let sigma = TruthAssignment::from_index(n, k);
        let satisfying = bits_satisfy(&art.cnf, k);
        for enc in ENCODINGS {
            let x = canonical_profile(&art, &sigma, enc)?;
            let report = is_nash(game, &x, &Rational::zero())?;
            tally.check(report.is_equilibrium, game, &x, || {
                format!("canonical profile of {sigma} ({enc:?}) is not Nash: {:?}", report.worst)
            });
            let e_true = plays_true(&x, e);
            tally.check(e_true == satisfying, game, &x, || {
                format!("E plays T = {e_true} but {sigma} satisfying = {satisfying}")
            });
            any_true |= e_true;
            if witness.is_none() {
                witness = Some(x);
            }
        }
    }
    let x = witness.expect("at least one assignment");
    tally.check(any_true == model.is_some(), game, &x, || {
        format!(
            "canonical existence of E = T is {any_true}, brute force found {:?}",
            model.as_ref().map(ToString::to_string)
        )
    });
    Ok(tally.finish("sat-equivalence", cnf))
}

/// The action-constrained instance has a canonical constrained equilibrium
/// iff the formula is satisfiable; in the payoff variant `E` receives `α` on
/// satisfying canonical profiles and `α/2` on the others.
pub fn validate_constrained_instances(
    cnf: &CnfFormula,
    alpha: &Rational,
) -> Result<LemmaReport, OracleError> {
    let (act, act_c) = build_action_constrained_instance(cnf)?;
    let (pay, pay_c) = build_payoff_constrained_instance(cnf, alpha)?;
    let n = bounded(&act)?;
    let model = sat_brute_force(cnf)?;
    let mut tally = Tally::new();
    let (mut act_exists, mut pay_exists) = (false, false);
    let half_alpha = alpha / int(2);

    for k in 0..1u64 << n {
        let sigma = TruthAssignment::from_index(n, k);
        let satisfying = bits_satisfy(&act.cnf, k);
        for enc in ENCODINGS {
            let x = canonical_profile(&act, &sigma, enc)?;
            let r = check_constrained(&act.game, &x, std::slice::from_ref(&act_c))?;
            tally.check(r.nash.is_equilibrium, &act.game, &x, || {
                format!("canonical profile of {sigma} is not Nash")
            });
            tally.check(
                r.is_constrained_equilibrium == satisfying,
                &act.game,
                &x,
                || format!("{act_c} holds = {} for {sigma}", r.is_constrained_equilibrium),
            );
            act_exists |= r.is_constrained_equilibrium;

            let y = canonical_profile(&pay, &sigma, enc)?;
            let r = check_constrained(&pay.game, &y, std::slice::from_ref(&pay_c))?;
            let pay_e = expected_payoff(&pay.game, &y, pay.root())?;
            tally.check(r.nash.is_equilibrium, &pay.game, &y, || {
                format!("canonical profile of {sigma} is not Nash in the payoff variant")
            });
            let expected = if satisfying { alpha } else { &half_alpha };
            tally.check(pay_e == *expected, &pay.game, &y, || {
                format!("pay_E = {pay_e} for {sigma}, expected {expected}")
            });
            tally.check(
                r.is_constrained_equilibrium == satisfying,
                &pay.game,
                &y,
                || format!("{pay_c} holds = {} for {sigma}", r.is_constrained_equilibrium),
            );
            pay_exists |= r.is_constrained_equilibrium;
        }
    }
    let x = canonical_profile(&act, &TruthAssignment::from_index(n, 0), FEncoding::S2ForFalse)?;
    tally.check(act_exists == model.is_some(), &act.game, &x, || {
        format!("action-constrained existence {act_exists} disagrees with brute force")
    });
    tally.check(pay_exists == model.is_some(), &pay.game, &x, || {
        format!("payoff-constrained existence {pay_exists} disagrees with brute force")
    });
    Ok(tally.finish("constrained-instances", cnf))
}

/// Candidate equilibria of the pennies game: every canonical profile with the
/// pair mixing uniformly, and additionally with both playing T whenever `E`
/// plays T. Returned with the assignment index they came from.
pub fn pennies_candidates(art: &ReductionArtifacts) -> Result<Vec<(u64, Profile)>, OracleError> {
    let n = bounded(art)?;
    let (p1, p2) = art.pennies.ok_or(ReductionError::PenniesUnsupported)?;
    let game = &art.game;
    let mut out = Vec::new();
    for k in 0..1u64 << n {
        let sigma = TruthAssignment::from_index(n, k);
        for enc in ENCODINGS {
            let x = canonical_profile(art, &sigma, enc)?;
            if plays_true(&x, art.root()) {
                let pure = x
                    .clone()
                    .with(game, p1, MixedStrategy::pure(2, 0))?
                    .with(game, p2, MixedStrategy::pure(2, 0))?;
                out.push((k, x));
                out.push((k, pure));
            } else {
                out.push((k, x));
            }
        }
    }
    Ok(out)
}

/// The pennies slice: the pair's two-player game with `E` frozen to `e_true`.
pub fn pennies_slice(art: &ReductionArtifacts, e_true: bool) -> Result<GraphicalGame, OracleError> {
    let (p1, p2) = art.pennies.ok_or(ReductionError::PenniesUnsupported)?;
    let game = &art.game;
    let ctx = Profile::empty(game).with(game, art.root(), MixedStrategy::pure(2, usize::from(!e_true)))?;
    Ok(condition_on(game, &[p1, p2], &ctx)?)
}

/// The pennies extension: with `E` playing F the pair's only equilibrium is
/// uniform with payoffs 0; with `E` playing T every pair profile is an
/// equilibrium; ANOTHER-NASH and NON-RANDOM over the pair succeed on the
/// canonical candidates iff the formula is satisfiable.
pub fn validate_pennies(cnf: &CnfFormula) -> Result<LemmaReport, OracleError> {
    let art = build_another_nash_instance(cnf)?;
    let n = bounded(&art)?;
    let model = sat_brute_force(cnf)?;
    let (p1, p2) = art.pennies.expect("pennies instance");
    let game = &art.game;
    let mut tally = Tally::new();
    let (a, b) = (PlayerId(0), PlayerId(1));
    let half = rat(1, 2);

    let off = pennies_slice(&art, false)?;
    let uniform = Profile::empty(&off)
        .with(&off, a, MixedStrategy::uniform(2))?
        .with(&off, b, MixedStrategy::uniform(2))?;
    let eq = enumerate_equilibria_2x2(&off, (a, b))?;
    let points = eq.finite().map(|f| pair_points(f, a, b));
    tally.check(
        points == Some(vec![(half.clone(), half.clone())]),
        &off,
        &uniform,
        || format!("E = F slice equilibria: {eq:?}"),
    );
    let pays = payoff_vector(&off, &uniform)?;
    tally.check(pays.iter().all(Zero::is_zero), &off, &uniform, || {
        format!("E = F slice payoffs {pays:?}")
    });

    let on = pennies_slice(&art, true)?;
    let eq = enumerate_equilibria_2x2(&on, (a, b))?;
    tally.check(eq == PairEquilibria::Continuum, &on, &uniform, || {
        format!("E = T slice should be a continuum, got {eq:?}")
    });
    for y in grid_profiles(&on, 4, &Budget::default())? {
        let ok = is_nash(&on, &y, &Rational::zero())?.is_equilibrium;
        tally.check(ok, &on, &y, || "E = T slice profile is not an equilibrium".into());
    }

    let candidates = pennies_candidates(&art)?;
    for (k, y) in &candidates {
        let ok = is_nash(game, y, &Rational::zero())?.is_equilibrium;
        tally.check(ok, game, y, || {
            format!("pennies candidate from assignment {k} is not Nash")
        });
    }
    let profiles: Vec<Profile> = candidates.iter().map(|(_, y)| y.clone()).collect();
    let base = (0..1u64 << n).find(|&k| !bits_satisfy(&art.cnf, k));
    match base {
        None => tally.note("every assignment satisfies the padded formula; ANOTHER-NASH skipped"),
        Some(k) => {
            let sigma = TruthAssignment::from_index(n, k);
            let x = canonical_profile(&art, &sigma, FEncoding::S2ForFalse)?;
            let another = another_nash_desk(game, &x, &[p1, p2], &profiles)?;
            tally.check(another.is_some() == model.is_some(), game, &x, || {
                format!("ANOTHER-NASH found {another:?}, satisfiable = {}", model.is_some())
            });
        }
    }
    let mut non_random = false;
    for y in &profiles {
        non_random |= non_random_satisfied(game, y, &[p1, p2])?;
    }
    tally.check(non_random == model.is_some(), game, &profiles[0], || {
        format!("NON-RANDOM = {non_random}, satisfiable = {}", model.is_some())
    });
    Ok(tally.finish("pennies-extension", cnf))
}

fn random_profile(game: &GraphicalGame, rng: &mut impl Rng, max_den: i64) -> Profile {
    let mut x = Profile::empty(game);
    for p in game.ids() {
        let den = rng.gen_range(1..=max_den);
        let num = rng.gen_range(0..=den);
        x.set(game, p, MixedStrategy::binary(rat(num, den)).expect("in [0,1]"))
            .expect("binary player");
    }
    x
}

/// Making every player depend on `E`: `pay′_p = pay_p·(1 + (γ−1)E_T)` on
/// random rational profiles, and Nash verdicts agree with the base game on
/// canonical and random grid profiles.
pub fn validate_gamma_scaling(
    cnf: &CnfFormula,
    gammas: &[Rational],
    samples: usize,
    rng: &mut impl Rng,
) -> Result<LemmaReport, OracleError> {
    let base = build_gphi(cnf)?;
    let n = bounded(&base)?;
    let e = base.root();
    let mut tally = Tally::new();
    for gamma in gammas {
        let scaled = build_gamma_scaled(&base, gamma)?;
        for _ in 0..samples {
            let x = random_profile(&base.game, rng, 12);
            let e_t = x.get(e).expect("global").prob(0).clone();
            let factor = Rational::one() + (gamma - Rational::one()) * &e_t;
            let before = payoff_vector(&base.game, &x)?;
            let after = payoff_vector(&scaled.game, &x)?;
            for p in base.game.ids() {
                let expected = if p == e {
                    before[p.0].clone()
                } else {
                    &before[p.0] * &factor
                };
                tally.check(after[p.0] == expected, &scaled.game, &x, || {
                    format!(
                        "gamma {gamma}: pay'_{} = {}, expected {expected}",
                        base.game.name(p),
                        after[p.0]
                    )
                });
            }
        }
        for k in 0..1u64 << n {
            let sigma = TruthAssignment::from_index(n, k);
            for enc in ENCODINGS {
                let x = canonical_profile(&base, &sigma, enc)?;
                let v0 = is_nash(&base.game, &x, &Rational::zero())?.is_equilibrium;
                let v1 = is_nash(&scaled.game, &x, &Rational::zero())?.is_equilibrium;
                tally.check(v0 && v1, &scaled.game, &x, || {
                    format!("gamma {gamma}: canonical {sigma} Nash in base {v0}, scaled {v1}")
                });
            }
        }
        for _ in 0..samples {
            let x = random_profile(&base.game, rng, 2);
            let v0 = is_nash(&base.game, &x, &Rational::zero())?.is_equilibrium;
            let v1 = is_nash(&scaled.game, &x, &Rational::zero())?.is_equilibrium;
            tally.check(v0 == v1, &scaled.game, &x, || {
                format!("gamma {gamma}: grid profile Nash in base {v0}, scaled {v1}")
            });
        }
    }
    Ok(tally.finish("gamma-scaling", cnf))
}

/// Pareto and strong checks on the doubled game. With a model, the
/// non-satisfying canonical profile (halves encoding) is strictly dominated
/// by the satisfying one and refuted by the grand coalition; without one it
/// is Pareto among all canonical profiles and no sampled coalition has a pure
/// improving deviation from its pure-encoded counterpart.
pub fn validate_pareto_strong(cnf: &CnfFormula) -> Result<LemmaReport, OracleError> {
    let base = build_gphi(cnf)?;
    let n = bounded(&base)?;
    let art = build_gamma_scaled(&base, &int(2))?;
    let game = &art.game;
    let e = art.root();
    let mut tally = Tally::new();
    let satisfying = |k: u64| bits_satisfy(&art.cnf, k);

    let Some(k_nonsat) = (0..1u64 << n).find(|&k| !satisfying(k)) else {
        tally.note("every assignment satisfies the padded formula; no distinguished profile");
        return Ok(tally.finish("pareto-strong", cnf));
    };
    let sigma = TruthAssignment::from_index(n, k_nonsat);
    let x = canonical_profile(&art, &sigma, FEncoding::S3ForFalse)?;
    let x_pure = canonical_profile(&art, &sigma, FEncoding::S2ForFalse)?;

    let mut candidates = Vec::with_capacity(2 << n);
    for k in 0..1u64 << n {
        for enc in ENCODINGS {
            candidates.push(canonical_profile(&art, &TruthAssignment::from_index(n, k), enc)?);
        }
    }
    for y in &candidates {
        let ok = is_nash(game, y, &Rational::zero())?.is_equilibrium;
        tally.check(ok, game, y, || "canonical candidate is not Nash in the doubled game".into());
    }
    let pareto = is_pareto_within(game, &x, &candidates)?;
    let pay_x = payoff_vector(game, &x)?;

    match (0..1u64 << n).find(|&k| satisfying(k)) {
        Some(k_star) => {
            let star = canonical_profile(&art, &TruthAssignment::from_index(n, k_star), FEncoding::S2ForFalse)?;
            let pay_star = payoff_vector(game, &star)?;
            let strict = pay_x.iter().zip(&pay_star).all(|(a, b)| a < b);
            tally.check(strict, game, &x, || {
                "satisfying canonical profile does not strictly improve every player".into()
            });
            tally.check(
                pay_x[e.0] == int(1) && pay_star[e.0] == int(2),
                game,
                &x,
                || format!("E moves {} -> {}, expected 1 -> 2", pay_x[e.0], pay_star[e.0]),
            );
            tally.check(!pareto.pareto, game, &x, || {
                "non-satisfying profile reported Pareto despite a model".into()
            });
            let search = StrongSearch {
                max_coalition_size: 1,
                grid_denominator: None,
                seeds: vec![star.clone()],
                budget: Budget::default(),
            };
            let strong = strong_check_desk(game, &x, &search)?;
            let grand = strong
                .witness
                .as_ref()
                .is_some_and(|w| w.coalition.len() == game.num_players());
            tally.check(
                strong.verdict == StrongVerdict::Refuted && grand,
                game,
                &x,
                || format!("strong check verdict {:?}", strong.verdict),
            );
            let pay_pure = payoff_vector(game, &x_pure)?;
            let ties = pay_pure.iter().zip(&pay_star).filter(|(a, b)| a >= b).count();
            if ties > 0 {
                tally.note(format!(
                    "pure encoding of the non-satisfying profile: {ties} players not strictly improved"
                ));
            }
        }
        None => {
            tally.check(pareto.pareto, game, &x, || {
                format!("unsatisfiable formula but candidate {:?} dominates", pareto.dominating)
            });
            let pareto_pure = is_pareto_within(game, &x_pure, &candidates)?;
            tally.check(pareto_pure.pareto, game, &x_pure, || {
                format!("pure-encoded profile dominated by {:?}", pareto_pure.dominating)
            });
            for coalition in sampled_coalitions(&art) {
                let w = coalition_improvement_pure(game, &x_pure, &coalition, &Budget::default())?;
                tally.check(w.is_none(), game, &x_pure, || {
                    let names: Vec<_> = coalition.iter().map(|&p| game.name(p)).collect();
                    format!("coalition {names:?} has a pure improving deviation")
                });
            }
            if let Some(g) = art.var_map.iter().find(|g| !plays_true(&x, g.x)) {
                let pair = [g.x_prime, g.x_double_prime];
                if coalition_improvement_pure(game, &x, &pair, &Budget::default())?.is_some() {
                    tally.note(
                        "halves-encoded profile is refuted as strong by an x'/x'' pair moving to (T,T)",
                    );
                }
            }
        }
    }
    Ok(tally.finish("pareto-strong", cnf))
}

/// Every coalition of at most two players, every variable gadget, and every
/// gate together with its children.
pub fn sampled_coalitions(art: &ReductionArtifacts) -> Vec<Vec<PlayerId>> {
    let ids: Vec<PlayerId> = art.game.ids().collect();
    let mut out: Vec<Vec<PlayerId>> = ids.iter().map(|&p| vec![p]).collect();
    for (i, &p) in ids.iter().enumerate() {
        for &q in &ids[i + 1..] {
            out.push(vec![p, q]);
        }
    }
    for g in &art.var_map {
        out.push(vec![g.x, g.x_prime, g.x_double_prime]);
    }
    for gate in &art.tree.gates {
        out.push(vec![gate.node, gate.left, gate.right]);
    }
    out
}
