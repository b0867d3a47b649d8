use num_traits::Signed;

use super::{
    pad_clauses, AndTree, CnfFormula, Gate, ReductionArtifacts, ReductionError, Role,
    VariableGadget,
};
use crate::equilibrium::{CmpOp, Constraint, EvalFn};
use crate::game::{GraphicalGame, Player, PlayerId, UtilityTable};
use crate::rational::{int, Rational};

const T: usize = 0;

fn binary_actions() -> Vec<String> {
    vec!["T".into(), "F".into()]
}

fn table(arity: usize, f: impl FnMut(&[usize]) -> Rational) -> UtilityTable {
    UtilityTable::from_fn(vec![2; arity + 1], f)
}

/// Utility for the AND-gate rule; `root` is `None` for tree players and
/// `Some((win, correct_false, wrong))` for `E`.
fn gate_table(root: Option<(&Rational, &Rational, &Rational)>) -> UtilityTable {
    table(2, |j| {
        let both_true = j[1] == T && j[2] == T;
        let plays_true = j[0] == T;
        match root {
            None => int(i64::from(plays_true == both_true)),
            Some((win, correct_false, wrong)) => match (plays_true, both_true) {
                (true, true) => win.clone(),
                (false, false) => correct_false.clone(),
                _ => wrong.clone(),
            },
        }
    })
}

fn build(cnf: &CnfFormula, alpha: Option<Rational>) -> ReductionArtifacts {
    let cnf = pad_clauses(cnf);
    let mut players: Vec<Player> = Vec::new();
    let mut roles = Vec::new();
    let push = |players: &mut Vec<Player>, roles: &mut Vec<Role>, player: Player, role| {
        players.push(player);
        roles.push(role);
        PlayerId(players.len() - 1)
    };

    let coordination = || table(1, |j| int(i64::from(j[0] == j[1])));
    let mut var_map = Vec::with_capacity(cnf.num_vars());
    for i in 1..=cnf.num_vars() {
        let base = players.len();
        let (xp, xpp) = (PlayerId(base + 1), PlayerId(base + 2));
        // Row T = (−2, 0, 0, 1), row F = (2, 0, 0, −1) over x′x″ ∈ TT, TF, FT, FF.
        let x_table = table(2, |j| {
            let sign = if j[0] == T { 1 } else { -1 };
            match (j[1] == T, j[2] == T) {
                (true, true) => int(-2 * sign),
                (false, false) => int(sign),
                _ => int(0),
            }
        });
        let x = push(
            &mut players,
            &mut roles,
            Player {
                name: format!("x{i}"),
                actions: binary_actions(),
                neighbors: vec![xp, xpp],
                utility: x_table,
            },
            Role::Variable,
        );
        push(
            &mut players,
            &mut roles,
            Player {
                name: format!("x{i}'"),
                actions: binary_actions(),
                neighbors: vec![xpp],
                utility: coordination(),
            },
            Role::VariablePrime,
        );
        push(
            &mut players,
            &mut roles,
            Player {
                name: format!("x{i}''"),
                actions: binary_actions(),
                neighbors: vec![xp],
                utility: coordination(),
            },
            Role::VariableDoublePrime,
        );
        var_map.push(VariableGadget {
            x,
            x_prime: xp,
            x_double_prime: xpp,
        });
    }

    let mut clause_map = Vec::with_capacity(cnf.num_clauses());
    for (j, clause) in cnf.clauses().iter().enumerate() {
        let mut vars: Vec<usize> = Vec::with_capacity(clause.len());
        for lit in clause {
            let v = lit.unsigned_abs() as usize;
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let utility = table(vars.len(), |joint| {
            let value = clause.iter().any(|&lit| {
                let k = vars
                    .iter()
                    .position(|&v| v == lit.unsigned_abs() as usize)
                    .expect("literal variable is a neighbor");
                (joint[k + 1] == T) == (lit > 0)
            });
            int(i64::from((joint[0] == T) == value))
        });
        let c = push(
            &mut players,
            &mut roles,
            Player {
                name: format!("c{}", j + 1),
                actions: binary_actions(),
                neighbors: vars.iter().map(|&v| var_map[v - 1].x).collect(),
                utility,
            },
            Role::Clause,
        );
        clause_map.push(c);
    }

    let mut gates = Vec::new();
    let mut level = clause_map.clone();
    let mut next_tree = 1;
    while level.len() > 2 {
        let mut parents = Vec::with_capacity(level.len() / 2);
        for pair in level.chunks(2) {
            let t = push(
                &mut players,
                &mut roles,
                Player {
                    name: format!("t{next_tree}"),
                    actions: binary_actions(),
                    neighbors: vec![pair[0], pair[1]],
                    utility: gate_table(None),
                },
                Role::Tree,
            );
            next_tree += 1;
            gates.push(Gate {
                node: t,
                left: pair[0],
                right: pair[1],
            });
            parents.push(t);
        }
        level = parents;
    }

    let (win, correct_false, wrong) = match &alpha {
        Some(a) => (a.clone(), a / int(2), -a.clone()),
        None => (int(2), int(1), int(0)),
    };
    let root = push(
        &mut players,
        &mut roles,
        Player {
            name: "E".into(),
            actions: binary_actions(),
            neighbors: vec![level[0], level[1]],
            utility: gate_table(Some((&win, &correct_false, &wrong))),
        },
        Role::Root,
    );
    gates.push(Gate {
        node: root,
        left: level[0],
        right: level[1],
    });

    let game = GraphicalGame::new(players).expect("generated game is well-formed");
    ReductionArtifacts {
        game,
        cnf,
        roles,
        var_map,
        clause_map,
        tree: AndTree { root, gates },
        gamma: None,
        alpha,
        pennies: None,
    }
}

/// The base game `G(Φ)`. The formula is padded first when needed.
///
/// ```
/// use nashforge::reduction::{build_gphi, parse_dimacs};
///
/// let cnf = parse_dimacs("p cnf 3 3\n1 -2 0\n2 3 0\n-1 0\n").unwrap();
/// let art = build_gphi(&cnf).unwrap();
/// // 4 variables after padding, 4 clauses, 2 internal gates and E.
/// assert_eq!(art.game.num_players(), 4 * 3 + 4 + 2 + 1);
/// ```
pub fn build_gphi(cnf: &CnfFormula) -> Result<ReductionArtifacts, ReductionError> {
    Ok(build(cnf, None))
}

/// `G(Φ)` with the constraint `[p_T(E) = 1]`.
pub fn build_action_constrained_instance(
    cnf: &CnfFormula,
) -> Result<(ReductionArtifacts, Constraint), ReductionError> {
    let art = build(cnf, None);
    let constraint = Constraint::Action {
        player: art.game.name(art.root()).to_string(),
        action: "T".into(),
        op: CmpOp::Eq,
        k: int(1),
    };
    Ok((art, constraint))
}

/// `G(Φ)` with `E` paid `α`, `α/2` and `−α` for the three root rules, and
/// the constraint `[pay_E = α]`.
pub fn build_payoff_constrained_instance(
    cnf: &CnfFormula,
    alpha: &Rational,
) -> Result<(ReductionArtifacts, Constraint), ReductionError> {
    if !alpha.is_positive() {
        return Err(ReductionError::NonPositiveAlpha);
    }
    let art = build(cnf, Some(alpha.clone()));
    let constraint = Constraint::Payoff {
        players: vec![art.game.name(art.root()).to_string()],
        eval: EvalFn::Single,
        op: CmpOp::Eq,
        k: alpha.clone(),
    };
    Ok((art, constraint))
}

/// `G(Φ)` plus the pair `P₁`, `P₂` with `Neigh(P₁) = {P₂, E}` and
/// `Neigh(P₂) = {P₁, E}`. When `E` plays T both are paid 0; when `E` plays F
/// they play matching pennies (`P₁` wins on a match).
pub fn build_another_nash_instance(cnf: &CnfFormula) -> Result<ReductionArtifacts, ReductionError> {
    let mut art = build(cnf, None);
    let root = art.root();
    let mut players = art.game.players().to_vec();
    let (p1, p2) = (PlayerId(players.len()), PlayerId(players.len() + 1));
    let pennies = |sign: i64| {
        table(2, move |j| {
            if j[2] == T {
                int(0)
            } else if j[0] == j[1] {
                int(sign)
            } else {
                int(-sign)
            }
        })
    };
    players.push(Player {
        name: "P1".into(),
        actions: binary_actions(),
        neighbors: vec![p2, root],
        utility: pennies(1),
    });
    players.push(Player {
        name: "P2".into(),
        actions: binary_actions(),
        neighbors: vec![p1, root],
        utility: pennies(-1),
    });
    art.game = GraphicalGame::new(players)?;
    art.roles.extend([Role::P1, Role::P2]);
    art.pennies = Some((p1, p2));
    Ok(art)
}

/// `G′_γ`: every player other than `E` also depends on `E`, and is paid `γ·u`
/// when `E` plays T and `u` when `E` plays F.
pub fn build_gamma_scaled(
    artifacts: &ReductionArtifacts,
    gamma: &Rational,
) -> Result<ReductionArtifacts, ReductionError> {
    if !gamma.is_positive() {
        return Err(ReductionError::NonPositiveGamma);
    }
    if artifacts.pennies.is_some() {
        return Err(ReductionError::PenniesUnsupported);
    }
    let root = artifacts.root();
    let players = artifacts
        .game
        .players()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if PlayerId(i) == root {
                return p.clone();
            }
            let mut neighbors = p.neighbors.clone();
            neighbors.push(root);
            let mut dims = p.utility.dims().to_vec();
            dims.push(2);
            // E is the last, fastest-varying axis; T is its first action.
            let entries = p
                .utility
                .entries()
                .iter()
                .flat_map(|u| [gamma * u, u.clone()])
                .collect();
            Player {
                neighbors,
                utility: UtilityTable::new(dims, entries).expect("sized to dims"),
                ..p.clone()
            }
        })
        .collect();
    Ok(ReductionArtifacts {
        game: GraphicalGame::new(players)?,
        gamma: Some(gamma.clone()),
        ..artifacts.clone()
    })
}
