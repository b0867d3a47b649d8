//! Property tests for the algebraic and structural invariants.

use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nashforge::equilibrium::{
    best_response_regret, coalition_improvement_pure, enumerate_equilibria_2x2,
    enumerate_pure_nash, grid_profiles, is_nash, is_pareto_within, satisfies_constraint, CmpOp,
    Constraint, EvalFn, PairEquilibria,
};
use nashforge::game::{
    dependency_graph, local_joint_actions, validate_game, validate_game_with_bounds, GraphicalGame,
    Player, PlayerId, StructuralBounds, UtilityTable,
};
use nashforge::oracle::bits_satisfy;
use nashforge::rational::{format_rational, int, parse_rational, rat, Rational};
use nashforge::reduction::{
    build_another_nash_instance, build_gamma_scaled, build_gphi, canonical_profile, parse_dimacs,
    CnfFormula, FEncoding, Role, TruthAssignment,
};
use nashforge::strategy::{
    expected_payoff, payoff_breakdown, payoff_vector, MixedStrategy, ProfileDoc,
};
use nashforge::{Budget, Profile};

// ---------------------------------------------------------------------------
// Generators

/// Random game with up to `max_players` players, 1 to 3 actions each, up to
/// two neighbors each and integer utilities in [-4, 4].
fn random_game(seed: u64, max_players: usize) -> GraphicalGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_players);
    let actions: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let players = (0..n)
        .map(|i| {
            let mut neighbors: Vec<PlayerId> = (0..n)
                .filter(|&j| j != i && rng.gen_bool(0.5))
                .map(PlayerId)
                .collect();
            neighbors.truncate(2);
            let dims: Vec<usize> = std::iter::once(actions[i])
                .chain(neighbors.iter().map(|q| actions[q.0]))
                .collect();
            let utility = UtilityTable::from_fn(dims, |_| int(rng.gen_range(-4..=4)));
            Player {
                name: format!("p{i}"),
                actions: (0..actions[i]).map(|a| format!("a{a}")).collect(),
                neighbors,
                utility,
            }
        })
        .collect();
    GraphicalGame::new(players).expect("generated game is well formed")
}

fn random_strategy(rng: &mut impl Rng, actions: usize) -> MixedStrategy {
    let den = rng.gen_range(1..=6);
    loop {
        let weights: Vec<i64> = (0..actions).map(|_| rng.gen_range(0..=den)).collect();
        let total: i64 = weights.iter().sum();
        if total > 0 {
            return MixedStrategy::new(weights.iter().map(|&w| rat(w, total)).collect())
                .expect("normalized");
        }
    }
}

fn random_profile(game: &GraphicalGame, rng: &mut impl Rng) -> Profile {
    let mut x = Profile::empty(game);
    for p in game.ids() {
        x.set(game, p, random_strategy(rng, game.action_count(p))).unwrap();
    }
    x
}

fn clause_strategy(num_vars: usize) -> impl Strategy<Value = Vec<i32>> {
    proptest::sample::subsequence((1..=num_vars as i32).collect::<Vec<_>>(), 1..=num_vars.min(3))
        .prop_flat_map(|vars| {
            let len = vars.len();
            (Just(vars), proptest::collection::vec(any::<bool>(), len))
        })
        .prop_map(|(vars, neg)| {
            vars.into_iter().zip(neg).map(|(v, n)| if n { -v } else { v }).collect()
        })
}

/// Formulas with 1 to 4 variables and 1 to 4 clauses (at most 5 variables
/// after padding).
fn cnf_strategy() -> impl Strategy<Value = CnfFormula> {
    (1usize..=4)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(clause_strategy(n), 1..=4)))
        .prop_map(|(n, clauses)| CnfFormula::new(n, clauses).expect("valid clauses"))
}

fn sigma_of(n: usize, k: u64) -> TruthAssignment {
    TruthAssignment::from_index(n, k % (1 << n))
}

// ---------------------------------------------------------------------------
// Game structure

proptest! {
    #[test]
    fn local_joint_actions_match_table(seed in any::<u64>()) {
        let game = random_game(seed, 5);
        for p in game.ids() {
            let count = local_joint_actions(&game, p).unwrap().count();
            prop_assert_eq!(count, game.player(p).utility.len());
        }
    }

    #[test]
    fn dependency_graph_is_symmetric(seed in any::<u64>()) {
        let game = random_game(seed, 6);
        let g = dependency_graph(&game);
        for p in game.ids() {
            for q in game.ids() {
                prop_assert_eq!(g.has_edge(p, q), g.has_edge(q, p));
            }
            for &q in game.neighbors(p) {
                prop_assert!(g.has_edge(p, q));
            }
        }
    }

    #[test]
    fn game_document_round_trips(seed in any::<u64>()) {
        let game = random_game(seed, 5);
        let def = game.to_def();
        prop_assert!(validate_game(&def).is_empty());
        let text = serde_json::to_string(&def).unwrap();
        let back = GraphicalGame::from_def(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, game);
    }

    #[test]
    fn rationals_round_trip(num in -1000i64..1000, den in 1i64..1000) {
        let r = rat(num, den);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}

// ---------------------------------------------------------------------------
// Payoffs

proptest! {
    #[test]
    fn payoff_within_table_bounds(seed in any::<u64>()) {
        let game = random_game(seed, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let x = random_profile(&game, &mut rng);
        for p in game.ids() {
            let pay = expected_payoff(&game, &x, p).unwrap();
            let u = &game.player(p).utility;
            prop_assert!(u.min().unwrap() <= &pay && &pay <= u.max().unwrap());
        }
    }

    #[test]
    fn payoff_is_multilinear(seed in any::<u64>(), lambda_num in 0i64..=7) {
        let game = random_game(seed, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let x = random_profile(&game, &mut rng);
        let j = PlayerId(rng.gen_range(0..game.num_players()));
        let y = random_strategy(&mut rng, game.action_count(j));
        let z = random_strategy(&mut rng, game.action_count(j));
        let lambda = rat(lambda_num, 7);
        let mixed = MixedStrategy::mix(&lambda, &y, &z).unwrap();
        let at = |s: &MixedStrategy| x.clone().with(&game, j, s.clone()).unwrap();
        for i in game.ids() {
            let lhs = expected_payoff(&game, &at(&mixed), i).unwrap();
            let rhs = &lambda * expected_payoff(&game, &at(&y), i).unwrap()
                + (Rational::one() - &lambda) * expected_payoff(&game, &at(&z), i).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn payoff_is_local(seed in any::<u64>()) {
        let game = random_game(seed, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let x = random_profile(&game, &mut rng);
        for i in game.ids() {
            let before = expected_payoff(&game, &x, i).unwrap();
            for q in game.ids() {
                if q == i || game.neighbors(i).contains(&q) {
                    continue;
                }
                let moved = x.clone().with(&game, q, random_strategy(&mut rng, game.action_count(q))).unwrap();
                prop_assert_eq!(&expected_payoff(&game, &moved, i).unwrap(), &before);
            }
        }
    }

    #[test]
    fn payoff_touches_only_local_entries(seed in any::<u64>()) {
        let game = random_game(seed, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
        let x = random_profile(&game, &mut rng);
        for p in game.ids() {
            let b = payoff_breakdown(&game, &x, p).unwrap();
            prop_assert!(b.entries_touched <= game.player(p).utility.len());
        }
    }

    #[test]
    fn invalid_distributions_are_rejected(a in -5i64..=5, b in -5i64..=5, den in 1i64..=5) {
        let probs = vec![rat(a, den), rat(b, den)];
        let valid = a >= 0 && b >= 0 && a + b == den;
        prop_assert_eq!(MixedStrategy::new(probs).is_ok(), valid);
    }
}

// ---------------------------------------------------------------------------
// Equilibria

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nash_iff_zero_regret_on_grid(seed in any::<u64>()) {
        let game = random_game(seed, 3);
        for x in grid_profiles(&game, 2, &Budget::default()).unwrap() {
            let report = is_nash(&game, &x, &Rational::zero()).unwrap();
            let all_zero = game
                .ids()
                .all(|p| best_response_regret(&game, &x, p).unwrap().value.is_zero());
            prop_assert_eq!(report.is_equilibrium, all_zero);
        }
    }

    #[test]
    fn pure_enumeration_matches_unit_grid(seed in any::<u64>()) {
        let game = random_game(seed, 4);
        let pure = enumerate_pure_nash(&game, &Budget::default()).unwrap();
        let filtered: Vec<Profile> = grid_profiles(&game, 1, &Budget::default())
            .unwrap()
            .filter(|x| is_nash(&game, x, &Rational::zero()).unwrap().is_equilibrium)
            .collect();
        prop_assert_eq!(pure, filtered);
    }

    #[test]
    fn pair_equilibria_have_zero_regret(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let players = (0..2)
            .map(|i| Player {
                name: format!("p{i}"),
                actions: vec!["T".into(), "F".into()],
                neighbors: vec![PlayerId(1 - i)],
                utility: UtilityTable::from_fn(vec![2, 2], |_| int(rng.gen_range(-3..=3))),
            })
            .collect();
        let game = GraphicalGame::new(players).unwrap();
        if let PairEquilibria::Finite(found) = enumerate_equilibria_2x2(&game, (PlayerId(0), PlayerId(1))).unwrap() {
            prop_assert!(!found.is_empty());
            for x in &found {
                prop_assert!(is_nash(&game, x, &Rational::zero()).unwrap().is_equilibrium);
            }
        }
    }

    #[test]
    fn singleton_witness_iff_positive_regret(seed in any::<u64>()) {
        let game = random_game(seed, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 5);
        let x = random_profile(&game, &mut rng);
        for p in game.ids() {
            let regret = best_response_regret(&game, &x, p).unwrap().value;
            let witness = coalition_improvement_pure(&game, &x, &[p], &Budget::default()).unwrap();
            prop_assert_eq!(witness.is_some(), regret > Rational::zero());
        }
    }

    #[test]
    fn pareto_is_monotone_in_candidates(seed in any::<u64>(), split in 0usize..8) {
        let game = random_game(seed, 4);
        let eqs = enumerate_pure_nash(&game, &Budget::default()).unwrap();
        prop_assume!(!eqs.is_empty());
        let cut = split.min(eqs.len());
        for x in &eqs {
            let small = is_pareto_within(&game, x, &eqs[..cut]).unwrap();
            let large = is_pareto_within(&game, x, &eqs).unwrap();
            if !small.pareto {
                prop_assert!(!large.pareto);
            }
        }
    }

    #[test]
    fn equality_and_inequality_are_complementary(seed in any::<u64>(), k_num in 0i64..=6, k_den in 1i64..=3) {
        let game = random_game(seed, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 6);
        let x = random_profile(&game, &mut rng);
        let k = rat(k_num, k_den) - int(1);
        let p = PlayerId(rng.gen_range(0..game.num_players()));
        let name = game.name(p).to_string();
        let constraints = [
            Constraint::Action { player: name.clone(), action: game.player(p).actions[0].clone(), op: CmpOp::Eq, k: k.clone() },
            Constraint::Payoff { players: vec![name], eval: EvalFn::Single, op: CmpOp::Eq, k },
        ];
        for c in &constraints {
            let a = satisfies_constraint(&game, &x, c).unwrap();
            let b = satisfies_constraint(&game, &x, &c.negated()).unwrap();
            prop_assert_ne!(a, b);
        }
    }
}

// ---------------------------------------------------------------------------
// Reductions

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dimacs_round_trips(cnf in cnf_strategy()) {
        prop_assert_eq!(parse_dimacs(&cnf.to_dimacs()).unwrap(), cnf);
    }

    #[test]
    fn generated_games_are_well_formed(cnf in cnf_strategy()) {
        let art = build_gphi(&cnf).unwrap();
        let m = art.cnf.num_clauses();
        prop_assert!(m.is_power_of_two() && m >= 2);
        // Roles partition the players.
        let counts = |r: Role| art.players_with_role(r).len();
        let n = art.cnf.num_vars();
        prop_assert_eq!(counts(Role::Variable), n);
        prop_assert_eq!(counts(Role::VariablePrime), n);
        prop_assert_eq!(counts(Role::VariableDoublePrime), n);
        prop_assert_eq!(counts(Role::Clause), m);
        prop_assert_eq!(counts(Role::Tree) + counts(Role::Root), m - 1);
        prop_assert_eq!(counts(Role::Root), 1);
        prop_assert_eq!(art.game.num_players(), 3 * n + 2 * m - 1);
        // Every internal node has two children; every non-root node has one parent.
        prop_assert_eq!(art.tree.gates.len(), m - 1);
        let def = art.game.to_def();
        let tight = StructuralBounds { max_actions: 2, max_neighbors: 3 };
        prop_assert!(validate_game_with_bounds(&def, &tight).is_empty());
        for p in &def.players {
            prop_assert_eq!(p.actions.clone(), vec!["T".to_string(), "F".to_string()]);
        }
        let scaled = build_gamma_scaled(&art, &int(3)).unwrap().game.to_def();
        let loose = StructuralBounds { max_actions: 2, max_neighbors: 4 };
        prop_assert!(validate_game_with_bounds(&scaled, &loose).is_empty());
        let pennies = build_another_nash_instance(&cnf).unwrap().game.to_def();
        prop_assert!(validate_game(&pennies).is_empty());
    }

    #[test]
    fn artifacts_are_byte_deterministic(cnf in cnf_strategy()) {
        let a = build_gamma_scaled(&build_gphi(&cnf).unwrap(), &rat(5, 2)).unwrap();
        let b = build_gamma_scaled(&build_gphi(&cnf).unwrap(), &rat(5, 2)).unwrap();
        prop_assert_eq!(a.to_json(&[]), b.to_json(&[]));
    }

    #[test]
    fn canonical_profiles_are_equilibria(cnf in cnf_strategy()) {
        let art = build_gphi(&cnf).unwrap();
        let n = art.cnf.num_vars();
        let e = art.root();
        let mut exists = false;
        for k in 0..1u64 << n {
            let sigma = TruthAssignment::from_index(n, k);
            for enc in [FEncoding::S2ForFalse, FEncoding::S3ForFalse] {
                let x = canonical_profile(&art, &sigma, enc).unwrap();
                prop_assert!(is_nash(&art.game, &x, &Rational::zero()).unwrap().is_equilibrium);
                let e_true = x.get(e).unwrap().pure_action() == Some(0);
                prop_assert_eq!(e_true, bits_satisfy(&art.cnf, k));
                exists |= e_true;
            }
        }
        let original = (0..1u64 << cnf.num_vars()).any(|k| bits_satisfy(&cnf, k));
        prop_assert_eq!(exists, original);
    }

    #[test]
    fn canonical_profile_doc_round_trips(cnf in cnf_strategy(), k in any::<u64>()) {
        let art = build_another_nash_instance(&cnf).unwrap();
        let x = canonical_profile(&art, &sigma_of(art.cnf.num_vars(), k), FEncoding::S3ForFalse).unwrap();
        let doc = x.to_doc(&art.game);
        let back: ProfileDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        prop_assert_eq!(Profile::from_doc(&art.game, &back).unwrap(), x);
    }

    #[test]
    fn scaling_multiplies_payoffs(cnf in cnf_strategy(), seed in any::<u64>(), g in 1i64..=4) {
        let base = build_gphi(&cnf).unwrap();
        let gamma = rat(g + 1, 2);
        let scaled = build_gamma_scaled(&base, &gamma).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_profile(&base.game, &mut rng);
        let e = base.root();
        let factor = Rational::one() + (&gamma - Rational::one()) * x.get(e).unwrap().prob(0);
        let before = payoff_vector(&base.game, &x).unwrap();
        let after = payoff_vector(&scaled.game, &x).unwrap();
        for p in base.game.ids() {
            let want = if p == e { before[p.0].clone() } else { &before[p.0] * &factor };
            prop_assert_eq!(&after[p.0], &want);
        }
    }

    #[test]
    fn gadget_closed_forms(cnf in cnf_strategy(), seed in any::<u64>()) {
        let art = build_gphi(&cnf).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_profile(&art.game, &mut rng);
        let t = |p: PlayerId| x.get(p).unwrap().prob(0).clone();
        let one = Rational::one();
        for g in &art.var_map {
            let (a, b, xi) = (t(g.x_prime), t(g.x_double_prime), t(g.x));
            let pair = &a * &b + (&one - &a) * (&one - &b);
            prop_assert_eq!(expected_payoff(&art.game, &x, g.x_prime).unwrap(), pair);
            let alpha = int(2) * &a * &b - (&one - &a) * (&one - &b);
            let want = (&one - int(2) * &xi) * alpha;
            prop_assert_eq!(expected_payoff(&art.game, &x, g.x).unwrap(), want);
        }
    }

    #[test]
    fn pennies_closed_forms(cnf in cnf_strategy(), seed in any::<u64>()) {
        let art = build_another_nash_instance(&cnf).unwrap();
        let (p1, p2) = art.pennies.unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_profile(&art.game, &mut rng);
        let t = |p: PlayerId| x.get(p).unwrap().prob(0).clone();
        let one = Rational::one();
        let want = (&one - t(art.root())) * (int(2) * t(p1) - &one) * (int(2) * t(p2) - &one);
        prop_assert_eq!(expected_payoff(&art.game, &x, p1).unwrap(), want.clone());
        prop_assert_eq!(expected_payoff(&art.game, &x, p2).unwrap(), -want);
    }
}
