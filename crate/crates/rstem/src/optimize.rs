//! Local search over spanning trees.
//!
//! The search minimizes [`ObjectiveVector`] by first improvement over a
//! fixed move catalog:
//!
//!   (a) every 1-exchange: add one non-tree host edge, remove one tree
//!       edge from the cycle it closes;
//!   (b) templated multi-edge exchanges around each reducible-stem leaf
//!       and its witness pair, which rewire a witness path through host
//!       edges into the partner leaf or the hub;
//!   (c) a reattachment exchange at anchors lacking a witness pair,
//!       which moves all but one attached path onto reducible-stem
//!       vertices they neighbor, demoting the anchor out of the stem.
//!
//! Every emitted move yields a valid spanning tree. Each accepted move
//! strictly lowers the objective, so the search terminates.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::claims::{fixed_point_report, FixedPointReport};
use crate::graph::{Edge, Graph};
use crate::tree::{
    objective_with, qualifying_leaves, ObjectiveVector, SpanningTree, StemDecomposition, TreeError,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    Bfs,
    Dfs,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Bfs => write!(f, "bfs"),
            Strategy::Dfs => write!(f, "dfs"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OptimizeError {
    #[error("graph is not connected")]
    Disconnected,
}

/// Deterministic starting tree: traversal from `root` visiting neighbors
/// in ascending order.
pub fn initial_tree(g: &Graph, strategy: Strategy, root: usize) -> Result<SpanningTree, OptimizeError> {
    assert!(root < g.n(), "root {root} out of range for n={}", g.n());
    let n = g.n();
    let mut visited = vec![false; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    visited[root] = true;
    match strategy {
        Strategy::Bfs => {
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &v in g.neighbors(u) {
                    if !visited[v] {
                        visited[v] = true;
                        edges.push(Edge::new(u, v));
                        queue.push_back(v);
                    }
                }
            }
        }
        Strategy::Dfs => {
            let mut stack = vec![(root, 0usize)];
            while let Some(top) = stack.last_mut() {
                let (u, i) = *top;
                if i == g.degree(u) {
                    stack.pop();
                    continue;
                }
                top.1 += 1;
                let v = g.neighbors(u)[i];
                if !visited[v] {
                    visited[v] = true;
                    edges.push(Edge::new(u, v));
                    stack.push((v, 0));
                }
            }
        }
    }
    if edges.len() + 1 != n.max(1) {
        return Err(OptimizeError::Disconnected);
    }
    Ok(SpanningTree::from_edges(g, edges).expect("traversal tree is spanning"))
}

/// An edge exchange: remove `remove` from the tree, add `add` from the
/// host. Both sides are kept sorted; they always have equal length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    add: Vec<Edge>,
    remove: Vec<Edge>,
}

impl Move {
    pub fn new(mut add: Vec<Edge>, mut remove: Vec<Edge>) -> Self {
        assert_eq!(add.len(), remove.len(), "exchanges swap equally many edges");
        add.sort_unstable();
        remove.sort_unstable();
        Move { add, remove }
    }

    pub fn add(&self) -> &[Edge] {
        &self.add
    }

    pub fn remove(&self) -> &[Edge] {
        &self.remove
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "+{{")?;
        for (i, e) in self.add.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}} -{{")?;
        for (i, e) in self.remove.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Applies an exchange and revalidates the result; any malformed move
/// (edges missing from tree or host, duplicates, disconnection) surfaces
/// as the corresponding [`TreeError`].
pub fn apply_move(g: &Graph, t: &SpanningTree, mv: &Move) -> Result<SpanningTree, TreeError> {
    let mut edges: Vec<Edge> = t
        .edges()
        .iter()
        .copied()
        .filter(|e| !mv.remove.contains(e))
        .collect();
    edges.extend(mv.add.iter().copied());
    SpanningTree::from_edges(g, edges)
}

/// The two chosen witness leaves at one reducible-stem leaf: both have
/// leaf-branch paths attached there and no host neighbor elsewhere in the
/// reducible stem; `main` has the longer path (ties to the smaller id).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct WitnessPair {
    pub main: usize,
    pub partner: usize,
}

/// Witness choices for one tree: per reducible-stem leaf, a qualifying
/// pair where one exists; anchors with fewer than two qualifying leaves
/// are deficient (a reattachment exchange applies there). The hub is the
/// smallest branch vertex of the reducible stem, `None` when it has none.
#[derive(Clone, Debug)]
pub struct WitnessSelection {
    pub anchors: Vec<usize>,
    pub pairs: BTreeMap<usize, WitnessPair>,
    pub deficient: Vec<usize>,
    pub hub: Option<usize>,
}

impl WitnessSelection {
    /// All chosen witness leaves, ascending.
    pub fn witness_leaves(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(2 * self.pairs.len());
        for p in self.pairs.values() {
            out.push(p.main);
            out.push(p.partner);
        }
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("the reducible stem has no leaves")]
    NoRstemLeaves,
}

pub fn select_witnesses(
    g: &Graph,
    d: &StemDecomposition,
) -> Result<WitnessSelection, WitnessError> {
    if d.rstem_leaf_count() == 0 {
        return Err(WitnessError::NoRstemLeaves);
    }
    let anchors = d.rstem_leaves().to_vec();
    let mut pairs = BTreeMap::new();
    let mut deficient = Vec::new();
    for &a in &anchors {
        let q = qualifying_leaves(g, d, a);
        if q.len() >= 2 {
            pairs.insert(a, WitnessPair { main: q[0], partner: q[1] });
        } else {
            deficient.push(a);
        }
    }
    let hub = d.rstem_branch_vertices().first().copied();
    Ok(WitnessSelection { anchors, pairs, deficient, hub })
}

/// All candidate moves for one tree, in a fixed deterministic order:
/// 1-exchanges over non-tree edges ascending (cycle edges in path order
/// from the smaller endpoint), then the witness-path templates per anchor
/// and orientation, then reattachment exchanges at deficient anchors.
/// Templates fire only when the tree has at least three reducible-stem
/// leaves; template instantiations are validated before emission.
pub fn neighborhood(g: &Graph, t: &SpanningTree) -> Vec<Move> {
    let mut moves = Vec::new();
    for &e in g.edges() {
        if t.has_edge(e.u(), e.v()) {
            continue;
        }
        let cycle = t.path(e.u(), e.v());
        let verts = cycle.vertices();
        for w in verts.windows(2) {
            moves.push(Move::new(vec![e], vec![Edge::new(w[0], w[1])]));
        }
    }

    let d = t.decompose();
    if d.rstem_leaf_count() < 3 {
        return moves;
    }
    let sel = select_witnesses(g, &d).expect("leaves exist");
    let mut templated = Vec::new();
    for (&anchor, pair) in &sel.pairs {
        for (main, partner) in [(pair.main, pair.partner), (pair.partner, pair.main)] {
            witness_path_templates(g, &d, &sel, anchor, main, partner, &mut templated);
        }
    }
    for &anchor in &sel.deficient {
        reattachment_exchange(g, &d, anchor, &mut templated);
    }
    moves.extend(
        templated
            .into_iter()
            .filter(|mv| apply_move(g, t, mv).is_ok()),
    );
    moves
}

/// Exchanges along the witness path of `main` at `anchor`, with `partner`
/// the other chosen leaf. Path vertices run from the leaf to the vertex
/// attached to the anchor; `x-` and `x+` are the path predecessor and
/// successor of `x`. The variants, in emission order, keyed by the host
/// edges they need:
///   - leaf pull:    add {x main, x- partner}, drop {x x-, anchor attach}
///   - hub pull:     add {x main, x- hub},     drop {x x-, anchor attach}
///   - attach swap:  add {attach partner},     drop {anchor attach}
///   - hub swap:     add {attach hub},         drop {anchor attach}
///   - tail fold:    add {x partner, x+ hub},  drop {x x+, anchor attach}
///   - head fold:    add {x partner, x- hub},  drop {x x-, anchor attach}
///   - bridge fold:  add {x- x+, x partner, x hub},
///                   drop {x x-, x x+, anchor attach(partner)}
#[allow(clippy::too_many_arguments)]
fn witness_path_templates(
    g: &Graph,
    d: &StemDecomposition,
    sel: &WitnessSelection,
    anchor: usize,
    main: usize,
    partner: usize,
    out: &mut Vec<Move>,
) {
    let path = d.leaf_path(main).expect("witness leaves have paths");
    let v = &path.vertices;
    let len = v.len();
    let attach = path.attachment();
    let hub = sel.hub;
    let anchor_edge = Edge::new(anchor, attach);

    for j in 1..len {
        if g.has_edge(v[j], main) && g.has_edge(v[j - 1], partner) {
            out.push(Move::new(
                vec![Edge::new(v[j], main), Edge::new(v[j - 1], partner)],
                vec![Edge::new(v[j], v[j - 1]), anchor_edge],
            ));
        }
    }
    if let Some(w) = hub {
        for j in 1..len {
            if g.has_edge(v[j], main) && g.has_edge(v[j - 1], w) {
                out.push(Move::new(
                    vec![Edge::new(v[j], main), Edge::new(v[j - 1], w)],
                    vec![Edge::new(v[j], v[j - 1]), anchor_edge],
                ));
            }
        }
    }
    if g.has_edge(attach, partner) {
        out.push(Move::new(vec![Edge::new(attach, partner)], vec![anchor_edge]));
    }
    if let Some(w) = hub {
        if g.has_edge(attach, w) {
            out.push(Move::new(vec![Edge::new(attach, w)], vec![anchor_edge]));
        }
    }
    if let Some(w) = hub {
        for j in 0..len {
            if !g.has_edge(v[j], partner) {
                continue;
            }
            if j + 1 < len && g.has_edge(v[j + 1], w) {
                out.push(Move::new(
                    vec![Edge::new(v[j], partner), Edge::new(v[j + 1], w)],
                    vec![Edge::new(v[j], v[j + 1]), anchor_edge],
                ));
            }
            if j >= 1 && g.has_edge(v[j - 1], w) {
                out.push(Move::new(
                    vec![Edge::new(v[j], partner), Edge::new(v[j - 1], w)],
                    vec![Edge::new(v[j], v[j - 1]), anchor_edge],
                ));
            }
        }
        let partner_attach = d
            .leaf_path(partner)
            .expect("witness leaves have paths")
            .attachment();
        for j in 1..len.saturating_sub(1) {
            if g.has_edge(v[j], partner)
                && g.has_edge(v[j], w)
                && g.has_edge(v[j - 1], v[j + 1])
            {
                out.push(Move::new(
                    vec![
                        Edge::new(v[j - 1], v[j + 1]),
                        Edge::new(v[j], partner),
                        Edge::new(v[j], w),
                    ],
                    vec![
                        Edge::new(v[j], v[j - 1]),
                        Edge::new(v[j], v[j + 1]),
                        Edge::new(anchor, partner_attach),
                    ],
                ));
            }
        }
    }
}

/// At a deficient anchor, keep one attached path (the qualifying leaf if
/// one exists, else the smallest) and rehang every other attached path by
/// a host edge from its leaf into the reducible stem, detaching it from
/// the anchor. Emitted only when every moved leaf has such an edge.
fn reattachment_exchange(g: &Graph, d: &StemDecomposition, anchor: usize, out: &mut Vec<Move>) {
    let attached: Vec<usize> = d
        .leaf_paths()
        .values()
        .filter(|p| p.anchor == anchor)
        .map(|p| p.leaf())
        .collect();
    if attached.len() < 2 {
        return;
    }
    let q = qualifying_leaves(g, d, anchor);
    let keep = q.first().copied().unwrap_or(attached[0]);
    let mut add = Vec::new();
    let mut remove = Vec::new();
    for &leaf in &attached {
        if leaf == keep {
            continue;
        }
        let target = g
            .neighbors(leaf)
            .iter()
            .copied()
            .find(|&w| d.in_reducible_stem(w) && w != anchor);
        match target {
            Some(w) => {
                add.push(Edge::new(leaf, w));
                remove.push(Edge::new(anchor, d.leaf_path(leaf).unwrap().attachment()));
            }
            None => return,
        }
    }
    out.push(Move::new(add, remove));
}

/// One accepted step of the search.
#[derive(Clone, Debug)]
pub struct Improvement {
    pub mv: Move,
    pub tree: SpanningTree,
    pub objective: ObjectiveVector,
}

/// First move in neighborhood order that strictly lowers the objective.
pub fn improve_once(g: &Graph, t: &SpanningTree) -> Option<Improvement> {
    let current = objective_with(g, t, &t.decompose());
    for mv in neighborhood(g, t) {
        let tree = apply_move(g, t, &mv).expect("neighborhood moves are valid");
        let objective = objective_with(g, &tree, &tree.decompose());
        if objective < current {
            return Some(Improvement { mv, tree, objective });
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct OptimizeOutcome {
    pub tree: SpanningTree,
    pub objective: ObjectiveVector,
    /// Objective after the starting tree and after each accepted move.
    pub trajectory: Vec<ObjectiveVector>,
    pub steps: usize,
    /// False when the step cap stopped the search before a fixed point.
    pub converged: bool,
    pub report: FixedPointReport,
}

/// Runs first-improvement steps from `t0` to a fixed point (or the step
/// cap) and certifies the final tree's structural claims.
pub fn optimize(g: &Graph, t0: SpanningTree, max_steps: usize) -> OptimizeOutcome {
    let mut tree = t0;
    let mut objective = objective_with(g, &tree, &tree.decompose());
    let mut trajectory = vec![objective];
    let mut steps = 0;
    let mut converged = false;
    loop {
        if steps == max_steps {
            break;
        }
        match improve_once(g, &tree) {
            Some(imp) => {
                debug_assert!(imp.objective < objective);
                tree = imp.tree;
                objective = imp.objective;
                trajectory.push(objective);
                steps += 1;
            }
            None => {
                converged = true;
                break;
            }
        }
    }
    let report = fixed_point_report(g, &tree);
    OptimizeOutcome { tree, objective, trajectory, steps, converged, report }
}

/// Best outcome over restarts: breadth-first then depth-first starting
/// trees, each from every root in ascending order, optionally capped at
/// `limit` restarts. Ties keep the earliest restart.
#[derive(Clone, Debug)]
pub struct RootSearch {
    pub outcome: OptimizeOutcome,
    pub strategy: Strategy,
    pub root: usize,
    pub restarts: usize,
}

pub fn optimize_all_roots(
    g: &Graph,
    max_steps: usize,
    limit: Option<usize>,
) -> Result<RootSearch, OptimizeError> {
    let total = 2 * g.n();
    let cap = limit.unwrap_or(total).min(total).max(1);
    let mut best: Option<RootSearch> = None;
    for i in 0..cap {
        let (strategy, root) = if i < g.n() {
            (Strategy::Bfs, i)
        } else {
            (Strategy::Dfs, i - g.n())
        };
        let t0 = initial_tree(g, strategy, root)?;
        let outcome = optimize(g, t0, max_steps);
        let better = match &best {
            None => true,
            Some(b) => outcome.objective < b.outcome.objective,
        };
        if better {
            best = Some(RootSearch { outcome, strategy, root, restarts: cap });
        }
    }
    Ok(best.expect("at least one restart runs"))
}
