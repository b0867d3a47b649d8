//! Graphical games `⟨P, Neigh, Act, U⟩` with neighbor-local utility tables.
//!
//! Two representations exist. [`GameDef`] mirrors the JSON document and may
//! be malformed; [`validate_game`] reports everything wrong with it.
//! [`GraphicalGame`] is only ever built from well-formed input, resolves
//! neighbors to dense [`PlayerId`]s and stores each utility table as a flat
//! vector indexed by the table's axis order (owner first, then the neighbors
//! in declared order, first axis most significant).

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::rational::{RatString, Rational};

/// Dense index of a player inside one [`GraphicalGame`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlayerId(pub usize);

impl PlayerId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GameError {
    #[error("game is not well-formed:\n{0}")]
    Invalid(ValidationReport),
    #[error("unknown player {0:?}")]
    UnknownPlayer(String),
    #[error("player id {0} out of range")]
    PlayerOutOfRange(PlayerId),
    #[error("player {player:?} has no action {action:?}")]
    UnknownAction { player: String, action: String },
    #[error("utility table for {player:?} has {actual} entries, expected {expected}")]
    TableSize {
        player: String,
        expected: usize,
        actual: usize,
    },
}

/// Dense utility table. `dims[0]` is the owner's action count, `dims[k]` the
/// action count of the k-th neighbor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtilityTable {
    dims: Vec<usize>,
    entries: Vec<Rational>,
    // Entries times the lcm of their denominators, for integer accumulation.
    scale: BigInt,
    scaled: Vec<BigInt>,
}

impl UtilityTable {
    pub fn new(dims: Vec<usize>, entries: Vec<Rational>) -> Option<Self> {
        (dims.iter().product::<usize>() == entries.len()).then(|| Self::build(dims, entries))
    }

    fn build(dims: Vec<usize>, entries: Vec<Rational>) -> Self {
        let scale = entries
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let scaled = entries
            .iter()
            .map(|e| e.numer() * (&scale / e.denom()))
            .collect();
        Self {
            dims,
            entries,
            scale,
            scaled,
        }
    }

    /// Common denominator of all entries and the entries multiplied by it.
    pub(crate) fn scaled(&self) -> (&BigInt, &[BigInt]) {
        (&self.scale, &self.scaled)
    }

    /// Builds the table by calling `f` on every joint action in lexicographic
    /// axis order.
    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> Rational) -> Self {
        let entries = JointActions::new(dims.clone()).map(|ja| f(&ja.0)).collect();
        Self::build(dims, entries)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of neighbor joint actions per owner action.
    pub fn stride(&self) -> usize {
        self.dims[1..].iter().product()
    }

    pub fn index_of(&self, joint: &[usize]) -> usize {
        debug_assert_eq!(joint.len(), self.dims.len());
        joint
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&a, &d)| acc * d + a)
    }

    pub fn get(&self, joint: &[usize]) -> &Rational {
        &self.entries[self.index_of(joint)]
    }

    pub fn min(&self) -> Option<&Rational> {
        self.entries.iter().min()
    }

    pub fn max(&self) -> Option<&Rational> {
        self.entries.iter().max()
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self::build(self.dims.clone(), self.entries.iter().map(f).collect())
    }
}

/// One action index per table axis: the owner's, then each neighbor's.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JointAction(pub Vec<usize>);

impl JointAction {
    pub fn owner_action(&self) -> usize {
        self.0[0]
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

/// Odometer over a mixed-radix space, last axis fastest.
#[derive(Clone, Debug)]
pub struct JointActions {
    dims: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl JointActions {
    pub fn new(dims: Vec<usize>) -> Self {
        let next = if dims.iter().all(|&d| d > 0) {
            Some(vec![0; dims.len()])
        } else {
            None
        };
        Self { dims, next }
    }
}

impl Iterator for JointActions {
    type Item = JointAction;

    fn next(&mut self) -> Option<JointAction> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut axis = succ.len();
        loop {
            if axis == 0 {
                break;
            }
            axis -= 1;
            succ[axis] += 1;
            if succ[axis] < self.dims[axis] {
                self.next = Some(succ);
                break;
            }
            succ[axis] = 0;
        }
        Some(JointAction(current))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Player {
    pub name: String,
    pub actions: Vec<String>,
    pub neighbors: Vec<PlayerId>,
    pub utility: UtilityTable,
}

impl Player {
    pub fn action_index(&self, action: &str) -> Option<usize> {
        self.actions.iter().position(|a| a == action)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphicalGame {
    players: Vec<Player>,
    by_name: HashMap<String, PlayerId>,
}

impl GraphicalGame {
    /// Builds a game from index-resolved players, rejecting anything that
    /// violates the well-formedness invariants.
    pub fn new(players: Vec<Player>) -> Result<Self, GameError> {
        let violations = check_resolved(&players);
        if !violations.is_empty() {
            return Err(GameError::Invalid(ValidationReport { violations }));
        }
        let by_name = players
            .iter()
            .enumerate()
            .map(|(i, p)| (p.name.clone(), PlayerId(i)))
            .collect();
        Ok(Self { players, by_name })
    }

    pub fn from_def(def: &GameDef) -> Result<Self, GameError> {
        let report = validate_game(def);
        if !report.is_empty() {
            return Err(GameError::Invalid(report));
        }
        let ids: HashMap<&str, PlayerId> = def
            .players
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.as_str(), PlayerId(i)))
            .collect();
        let mut players = Vec::with_capacity(def.players.len());
        for p in &def.players {
            let neighbors: Vec<PlayerId> = p.neighbors.iter().map(|n| ids[n.as_str()]).collect();
            let axes: Vec<&[String]> = std::iter::once(p.actions.as_slice())
                .chain(neighbors.iter().map(|n| def.players[n.0].actions.as_slice()))
                .collect();
            let dims = axes.iter().map(|a| a.len()).collect();
            let utility = UtilityTable::from_fn(dims, |joint| {
                p.utility[&joint_key(&axes, joint)].0.clone()
            });
            players.push(Player {
                name: p.id.clone(),
                actions: p.actions.clone(),
                neighbors,
                utility,
            });
        }
        Self::new(players)
    }

    pub fn to_def(&self) -> GameDef {
        let players = self
            .players
            .iter()
            .map(|p| {
                let axes = self.axes(p);
                let utility = JointActions::new(p.utility.dims.clone())
                    .zip(&p.utility.entries)
                    .map(|(ja, v)| (joint_key(&axes, &ja.0), RatString(v.clone())))
                    .collect();
                PlayerDef {
                    id: p.name.clone(),
                    actions: p.actions.clone(),
                    neighbors: p
                        .neighbors
                        .iter()
                        .map(|n| self.players[n.0].name.clone())
                        .collect(),
                    utility,
                }
            })
            .collect();
        GameDef { players }
    }

    fn axes<'a>(&'a self, p: &'a Player) -> Vec<&'a [String]> {
        std::iter::once(p.actions.as_slice())
            .chain(p.neighbors.iter().map(|n| self.players[n.0].actions.as_slice()))
            .collect()
    }

    /// Serialized joint-action key (`"T,F,T"`) for one of `player`'s table
    /// entries.
    pub fn joint_key(&self, player: PlayerId, joint: &JointAction) -> String {
        let p = &self.players[player.0];
        joint_key(&self.axes(p), &joint.0)
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn ids(&self) -> impl Iterator<Item = PlayerId> + '_ {
        (0..self.players.len()).map(PlayerId)
    }

    pub fn player(&self, id: PlayerId) -> &Player {
        &self.players[id.0]
    }

    pub fn get(&self, id: PlayerId) -> Result<&Player, GameError> {
        self.players.get(id.0).ok_or(GameError::PlayerOutOfRange(id))
    }

    pub fn name(&self, id: PlayerId) -> &str {
        &self.players[id.0].name
    }

    pub fn id_of(&self, name: &str) -> Option<PlayerId> {
        self.by_name.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<PlayerId, GameError> {
        self.id_of(name)
            .ok_or_else(|| GameError::UnknownPlayer(name.to_string()))
    }

    pub fn action_index(&self, player: PlayerId, action: &str) -> Result<usize, GameError> {
        let p = self.get(player)?;
        p.action_index(action).ok_or_else(|| GameError::UnknownAction {
            player: p.name.clone(),
            action: action.to_string(),
        })
    }

    pub fn neighbors(&self, id: PlayerId) -> &[PlayerId] {
        &self.players[id.0].neighbors
    }

    pub fn action_count(&self, id: PlayerId) -> usize {
        self.players[id.0].actions.len()
    }

    /// The game restricted to `keep`, which must be closed under `Neigh`.
    pub fn subgame(&self, keep: &[PlayerId]) -> Result<GraphicalGame, GameError> {
        let remap: HashMap<PlayerId, PlayerId> = keep
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, PlayerId(i)))
            .collect();
        let mut players = Vec::with_capacity(keep.len());
        for &id in keep {
            let p = self.get(id)?;
            let mut neighbors = Vec::with_capacity(p.neighbors.len());
            for n in &p.neighbors {
                match remap.get(n) {
                    Some(&m) => neighbors.push(m),
                    None => {
                        return Err(GameError::Invalid(ValidationReport {
                            violations: vec![Violation::new(
                                ViolationKind::UnknownNeighbor,
                                Some(&p.name),
                                format!(
                                    "neighbor {:?} lies outside the requested subgame",
                                    self.name(*n)
                                ),
                            )],
                        }))
                    }
                }
            }
            players.push(Player {
                neighbors,
                ..p.clone()
            });
        }
        GraphicalGame::new(players)
    }
}

fn joint_key(axes: &[&[String]], joint: &[usize]) -> String {
    joint
        .iter()
        .zip(axes)
        .map(|(&a, names)| names[a].as_str())
        .collect::<Vec<_>>()
        .join(",")
}

/// JSON-facing game document.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GameDef {
    pub players: Vec<PlayerDef>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlayerDef {
    pub id: String,
    pub actions: Vec<String>,
    #[serde(default)]
    pub neighbors: Vec<String>,
    pub utility: IndexMap<String, RatString>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    DuplicatePlayer,
    NoActions,
    DuplicateAction,
    InvalidActionName,
    SelfNeighbor,
    DuplicateNeighbor,
    UnknownNeighbor,
    IncompleteUtilityTable,
    UnexpectedUtilityEntry,
    TooManyActions,
    TooManyNeighbors,
}

impl ViolationKind {
    pub fn label(self) -> &'static str {
        match self {
            Self::DuplicatePlayer => "duplicate player",
            Self::NoActions => "no actions",
            Self::DuplicateAction => "duplicate action",
            Self::InvalidActionName => "invalid action name",
            Self::SelfNeighbor => "self-neighbor",
            Self::DuplicateNeighbor => "duplicate neighbor",
            Self::UnknownNeighbor => "unknown neighbor",
            Self::IncompleteUtilityTable => "incomplete utility table",
            Self::UnexpectedUtilityEntry => "unexpected utility entry",
            Self::TooManyActions => "too many actions",
            Self::TooManyNeighbors => "too many neighbors",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub player: Option<String>,
    pub detail: String,
}

impl Violation {
    fn new(kind: ViolationKind, player: Option<&str>, detail: String) -> Self {
        Self {
            kind,
            player: player.map(str::to_string),
            detail,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.player {
            Some(p) => write!(f, "{} [{}]: {}", self.kind, p, self.detail),
            None => write!(f, "{}: {}", self.kind, self.detail),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// Optional degree bounds checked on top of well-formedness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructuralBounds {
    pub max_actions: usize,
    pub max_neighbors: usize,
}

/// Lists every violated well-formedness invariant of `def`. Never fails.
pub fn validate_game(def: &GameDef) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen = HashSet::new();
    for p in &def.players {
        if !seen.insert(p.id.as_str()) {
            violations.push(Violation::new(
                ViolationKind::DuplicatePlayer,
                Some(&p.id),
                "player id declared more than once".into(),
            ));
        }
    }
    let actions_of: HashMap<&str, &[String]> = def
        .players
        .iter()
        .map(|p| (p.id.as_str(), p.actions.as_slice()))
        .collect();

    for p in &def.players {
        let who = Some(p.id.as_str());
        if p.actions.is_empty() {
            violations.push(Violation::new(
                ViolationKind::NoActions,
                who,
                "action set is empty".into(),
            ));
        }
        let mut names = HashSet::new();
        for a in &p.actions {
            if !names.insert(a.as_str()) {
                violations.push(Violation::new(
                    ViolationKind::DuplicateAction,
                    who,
                    format!("action {a:?} listed twice"),
                ));
            }
            if a.is_empty() || a.contains(',') {
                violations.push(Violation::new(
                    ViolationKind::InvalidActionName,
                    who,
                    format!("action {a:?} is empty or contains ','"),
                ));
            }
        }

        let mut resolvable = true;
        let mut listed = HashSet::new();
        for n in &p.neighbors {
            if n == &p.id {
                violations.push(Violation::new(
                    ViolationKind::SelfNeighbor,
                    who,
                    "player lists itself as a neighbor".into(),
                ));
            }
            if !listed.insert(n.as_str()) {
                violations.push(Violation::new(
                    ViolationKind::DuplicateNeighbor,
                    who,
                    format!("neighbor {n:?} listed twice"),
                ));
            }
            if !actions_of.contains_key(n.as_str()) {
                resolvable = false;
                violations.push(Violation::new(
                    ViolationKind::UnknownNeighbor,
                    who,
                    format!("neighbor {n:?} is not a player"),
                ));
            }
        }
        if !resolvable {
            continue;
        }

        let axes: Vec<&[String]> = std::iter::once(p.actions.as_slice())
            .chain(p.neighbors.iter().map(|n| actions_of[n.as_str()]))
            .collect();
        let dims: Vec<usize> = axes.iter().map(|a| a.len()).collect();
        let mut expected = HashSet::new();
        let mut missing = Vec::new();
        for ja in JointActions::new(dims) {
            let key = joint_key(&axes, &ja.0);
            if !p.utility.contains_key(&key) {
                missing.push(key.clone());
            }
            expected.insert(key);
        }
        if !missing.is_empty() {
            violations.push(Violation::new(
                ViolationKind::IncompleteUtilityTable,
                who,
                format!(
                    "{} of {} joint actions missing (first: {:?})",
                    missing.len(),
                    expected.len(),
                    missing[0]
                ),
            ));
        }
        for key in p.utility.keys() {
            if !expected.contains(key) {
                violations.push(Violation::new(
                    ViolationKind::UnexpectedUtilityEntry,
                    who,
                    format!("entry {key:?} is not a joint action of this table"),
                ));
            }
        }
    }
    ValidationReport { violations }
}

/// [`validate_game`] plus action-count and neighbor-count bounds.
pub fn validate_game_with_bounds(def: &GameDef, bounds: &StructuralBounds) -> ValidationReport {
    let mut report = validate_game(def);
    for p in &def.players {
        if p.actions.len() > bounds.max_actions {
            report.violations.push(Violation::new(
                ViolationKind::TooManyActions,
                Some(&p.id),
                format!("{} actions, bound {}", p.actions.len(), bounds.max_actions),
            ));
        }
        if p.neighbors.len() > bounds.max_neighbors {
            report.violations.push(Violation::new(
                ViolationKind::TooManyNeighbors,
                Some(&p.id),
                format!(
                    "{} neighbors, bound {}",
                    p.neighbors.len(),
                    bounds.max_neighbors
                ),
            ));
        }
    }
    report
}

fn check_resolved(players: &[Player]) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut names = HashSet::new();
    for (i, p) in players.iter().enumerate() {
        let who = Some(p.name.as_str());
        if !names.insert(p.name.as_str()) {
            violations.push(Violation::new(
                ViolationKind::DuplicatePlayer,
                who,
                "player name declared more than once".into(),
            ));
        }
        if p.actions.is_empty() {
            violations.push(Violation::new(
                ViolationKind::NoActions,
                who,
                "action set is empty".into(),
            ));
        }
        let distinct: HashSet<&str> = p.actions.iter().map(String::as_str).collect();
        if distinct.len() != p.actions.len() {
            violations.push(Violation::new(
                ViolationKind::DuplicateAction,
                who,
                "action listed twice".into(),
            ));
        }
        if p.actions.iter().any(|a| a.is_empty() || a.contains(',')) {
            violations.push(Violation::new(
                ViolationKind::InvalidActionName,
                who,
                "action name is empty or contains ','".into(),
            ));
        }
        let mut listed = BTreeSet::new();
        let mut resolvable = true;
        for &n in &p.neighbors {
            if n.0 == i {
                violations.push(Violation::new(
                    ViolationKind::SelfNeighbor,
                    who,
                    "player lists itself as a neighbor".into(),
                ));
            }
            if !listed.insert(n) {
                violations.push(Violation::new(
                    ViolationKind::DuplicateNeighbor,
                    who,
                    format!("neighbor {n} listed twice"),
                ));
            }
            if n.0 >= players.len() {
                resolvable = false;
                violations.push(Violation::new(
                    ViolationKind::UnknownNeighbor,
                    who,
                    format!("neighbor {n} out of range"),
                ));
            }
        }
        if !resolvable {
            continue;
        }
        let dims: Vec<usize> = std::iter::once(p.actions.len())
            .chain(p.neighbors.iter().map(|n| players[n.0].actions.len()))
            .collect();
        if p.utility.dims != dims {
            violations.push(Violation::new(
                ViolationKind::IncompleteUtilityTable,
                who,
                format!(
                    "table shape {:?} does not match axes {:?}",
                    p.utility.dims, dims
                ),
            ));
        }
    }
    violations
}

/// Undirected dependency graph: `{p, q}` is an edge iff one is a neighbor of
/// the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyGraph {
    adjacency: Vec<BTreeSet<PlayerId>>,
}

impl DependencyGraph {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn degree(&self, p: PlayerId) -> usize {
        self.adjacency[p.0].len()
    }

    pub fn has_edge(&self, p: PlayerId, q: PlayerId) -> bool {
        self.adjacency[p.0].contains(&q)
    }

    pub fn adjacent(&self, p: PlayerId) -> impl Iterator<Item = PlayerId> + '_ {
        self.adjacency[p.0].iter().copied()
    }

    /// Edges as `(p, q)` with `p < q`, sorted.
    pub fn edges(&self) -> Vec<(PlayerId, PlayerId)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, adj)| {
                adj.iter()
                    .filter(move |q| q.0 > i)
                    .map(move |&q| (PlayerId(i), q))
            })
            .collect()
    }
}

pub fn dependency_graph(game: &GraphicalGame) -> DependencyGraph {
    let mut adjacency = vec![BTreeSet::new(); game.num_players()];
    for q in game.ids() {
        for &p in game.neighbors(q) {
            adjacency[p.0].insert(q);
            adjacency[q.0].insert(p);
        }
    }
    DependencyGraph { adjacency }
}

/// Every joint action in `player`'s utility domain, once each, in
/// lexicographic axis order.
pub fn local_joint_actions(
    game: &GraphicalGame,
    player: PlayerId,
) -> Result<JointActions, GameError> {
    let p = game.get(player)?;
    Ok(JointActions::new(p.utility.dims.clone()))
}
