//! Structural certificates for optimizer fixed points.
//!
//! Each check evaluates one property that the exchange arguments force on
//! a locally optimal tree with at least three reducible-stem leaves, plus
//! a few that additionally need the host to be free of induced four-leaf
//! stars. Checks are evaluated literally on any tree: an inapplicable
//! check (its objects do not exist for this tree) counts as holding, a
//! violated one carries a concrete vertex witness.

use std::collections::BTreeSet;
use std::fmt;

use crate::graph::Graph;
use crate::optimize::{select_witnesses, WitnessSelection};
use crate::tree::{SpanningTree, StemDecomposition};

/// The checked properties. The first six are exactly the ones whose
/// exchange proofs use only single-edge moves, so the search neighborhood
/// enforces them at every fixed point with three or more reducible-stem
/// leaves; the remaining four need extra hypotheses on the host and are
/// reported but not guaranteed.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckKind {
    /// Reducible-stem leaves are pairwise non-adjacent in the host.
    RstemLeavesIndependent,
    /// The chosen witness leaves over all anchors form an independent set.
    WitnessSetIndependent,
    /// No witness leaf touches the witness path of a different anchor.
    WitnessPathsNonAdjacent,
    /// For a non-witness tree leaf p, the witness set and hub have at
    /// most |B_p| host neighbors on p's leaf-branch path, counted with
    /// multiplicity over the witness set.
    PlainPathNeighborBound,
    /// No reducible-stem leaf touches a stem branch vertex's neighbor on
    /// the far side of that branch vertex.
    LeafBranchNonAdjacency,
    /// Rewiring a stem branch onto the maximum-degree branch vertex is
    /// never possible through a host edge.
    HubReattachmentBlocked,
    /// Every anchor has two qualifying witness leaves.
    WitnessPairExists,
    /// Like the plain-path bound but one lower on witness paths.
    WitnessPathNeighborBound,
    /// A stem branch vertex with three stem-leaf neighbors has no other
    /// stem neighbor.
    BranchLeafSaturation,
    /// No stem branch vertex has four or more host neighbors among the
    /// reducible-stem leaves.
    HubLeafNeighborCap,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::RstemLeavesIndependent,
        CheckKind::WitnessSetIndependent,
        CheckKind::WitnessPathsNonAdjacent,
        CheckKind::PlainPathNeighborBound,
        CheckKind::LeafBranchNonAdjacency,
        CheckKind::HubReattachmentBlocked,
        CheckKind::WitnessPairExists,
        CheckKind::WitnessPathNeighborBound,
        CheckKind::BranchLeafSaturation,
        CheckKind::HubLeafNeighborCap,
    ];

    /// The checks guaranteed by the 1-exchange neighborhood alone.
    pub const EXCHANGE_INVARIANTS: [CheckKind; 6] = [
        CheckKind::RstemLeavesIndependent,
        CheckKind::WitnessSetIndependent,
        CheckKind::WitnessPathsNonAdjacent,
        CheckKind::PlainPathNeighborBound,
        CheckKind::LeafBranchNonAdjacency,
        CheckKind::HubReattachmentBlocked,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::RstemLeavesIndependent => "rstem_leaves_independent",
            CheckKind::WitnessSetIndependent => "witness_set_independent",
            CheckKind::WitnessPathsNonAdjacent => "witness_paths_non_adjacent",
            CheckKind::PlainPathNeighborBound => "plain_path_neighbor_bound",
            CheckKind::LeafBranchNonAdjacency => "leaf_branch_non_adjacency",
            CheckKind::HubReattachmentBlocked => "hub_reattachment_blocked",
            CheckKind::WitnessPairExists => "witness_pair_exists",
            CheckKind::WitnessPathNeighborBound => "witness_path_neighbor_bound",
            CheckKind::BranchLeafSaturation => "branch_leaf_saturation",
            CheckKind::HubLeafNeighborCap => "hub_leaf_neighbor_cap",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Concrete evidence for a violated check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckWitness {
    pub vertices: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub kind: CheckKind,
    pub applicable: bool,
    pub holds: bool,
    pub witness: Option<CheckWitness>,
}

impl CheckOutcome {
    fn vacuous(kind: CheckKind) -> Self {
        CheckOutcome { kind, applicable: false, holds: true, witness: None }
    }

    fn evaluated(kind: CheckKind, witness: Option<CheckWitness>) -> Self {
        CheckOutcome { kind, applicable: true, holds: witness.is_none(), witness }
    }
}

/// Outcomes for all checks on one tree, in [`CheckKind::ALL`] order.
#[derive(Clone, Debug)]
pub struct FixedPointReport {
    checks: Vec<CheckOutcome>,
}

impl FixedPointReport {
    pub fn checks(&self) -> &[CheckOutcome] {
        &self.checks
    }

    pub fn get(&self, kind: CheckKind) -> &CheckOutcome {
        self.checks
            .iter()
            .find(|c| c.kind == kind)
            .expect("all kinds present")
    }

    /// True when every check guaranteed by the 1-exchange neighborhood
    /// holds (inapplicable ones count as holding).
    pub fn exchange_invariants_hold(&self) -> bool {
        CheckKind::EXCHANGE_INVARIANTS
            .iter()
            .all(|&k| self.get(k).holds)
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.holds)
    }

    /// CSV rows `check,applicable,holds,witness`; details never contain
    /// commas.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,applicable,holds,witness\n");
        for c in &self.checks {
            let detail = c.witness.as_ref().map(|w| w.detail.as_str()).unwrap_or("");
            out.push_str(&format!(
                "{},{},{},{}\n",
                c.kind, c.applicable, c.holds, detail
            ));
        }
        out
    }
}

/// Evaluates every check on one tree. Trees whose reducible stem has no
/// leaf have nothing to check; every outcome is then vacuous.
pub fn fixed_point_report(g: &Graph, t: &SpanningTree) -> FixedPointReport {
    let d = t.decompose();
    if d.rstem_leaf_count() == 0 {
        return FixedPointReport {
            checks: CheckKind::ALL.iter().map(|&k| CheckOutcome::vacuous(k)).collect(),
        };
    }
    let sel = select_witnesses(g, &d).expect("stem has leaves");
    let checks = CheckKind::ALL
        .iter()
        .map(|&kind| run_check(kind, g, t, &d, &sel))
        .collect();
    FixedPointReport { checks }
}

fn run_check(
    kind: CheckKind,
    g: &Graph,
    t: &SpanningTree,
    d: &StemDecomposition,
    sel: &WitnessSelection,
) -> CheckOutcome {
    match kind {
        CheckKind::RstemLeavesIndependent => {
            if d.rstem_leaf_count() < 2 {
                return CheckOutcome::vacuous(kind);
            }
            CheckOutcome::evaluated(kind, independent_set_violation(g, d.rstem_leaves(), "leaves"))
        }
        CheckKind::WitnessPairExists => {
            let witness = sel.deficient.first().map(|&a| CheckWitness {
                vertices: vec![a],
                detail: format!("anchor {a} has fewer than two qualifying leaves"),
            });
            CheckOutcome::evaluated(kind, witness)
        }
        CheckKind::WitnessSetIndependent => {
            if sel.pairs.is_empty() {
                return CheckOutcome::vacuous(kind);
            }
            CheckOutcome::evaluated(
                kind,
                independent_set_violation(g, &sel.witness_leaves(), "witness leaves"),
            )
        }
        CheckKind::WitnessPathsNonAdjacent => {
            if sel.pairs.len() < 2 {
                return CheckOutcome::vacuous(kind);
            }
            CheckOutcome::evaluated(kind, witness_paths_violation(g, d, sel))
        }
        CheckKind::PlainPathNeighborBound => {
            if sel.hub.is_none() || !sel.deficient.is_empty() {
                return CheckOutcome::vacuous(kind);
            }
            CheckOutcome::evaluated(kind, plain_path_violation(g, d, sel))
        }
        CheckKind::WitnessPathNeighborBound => {
            if sel.hub.is_none() || !sel.deficient.is_empty() {
                return CheckOutcome::vacuous(kind);
            }
            CheckOutcome::evaluated(kind, witness_path_bound_violation(g, d, sel))
        }
        CheckKind::LeafBranchNonAdjacency => {
            if d.rstem_branch_vertices().is_empty() {
                return CheckOutcome::vacuous(kind);
            }
            CheckOutcome::evaluated(kind, leaf_branch_violation(g, t, d))
        }
        CheckKind::BranchLeafSaturation => {
            if d.rstem_branch_vertices().is_empty() {
                return CheckOutcome::vacuous(kind);
            }
            CheckOutcome::evaluated(kind, saturation_violation(t, d))
        }
        CheckKind::HubReattachmentBlocked => {
            if d.rstem_branch_vertices().len() < 2 {
                return CheckOutcome::vacuous(kind);
            }
            CheckOutcome::evaluated(kind, hub_reattachment_violation(g, t, d))
        }
        CheckKind::HubLeafNeighborCap => {
            if d.rstem_branch_vertices().is_empty() {
                return CheckOutcome::vacuous(kind);
            }
            CheckOutcome::evaluated(kind, leaf_cap_violation(g, d))
        }
    }
}

fn independent_set_violation(g: &Graph, set: &[usize], what: &str) -> Option<CheckWitness> {
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            if g.has_edge(u, v) {
                return Some(CheckWitness {
                    vertices: vec![u, v],
                    detail: format!("{what} {u} and {v} are adjacent in the host"),
                });
            }
        }
    }
    None
}

fn witness_paths_violation(
    g: &Graph,
    d: &StemDecomposition,
    sel: &WitnessSelection,
) -> Option<CheckWitness> {
    for (&ai, pi) in &sel.pairs {
        for (&aj, pj) in &sel.pairs {
            if ai == aj {
                continue;
            }
            for u in [pi.main, pi.partner] {
                for leaf in [pj.main, pj.partner] {
                    let path = d.leaf_path(leaf).expect("witness leaves have paths");
                    for &x in &path.vertices {
                        if g.has_edge(u, x) {
                            return Some(CheckWitness {
                                vertices: vec![u, x, leaf],
                                detail: format!(
                                    "witness {u} of anchor {ai} touches {x} on the path of {leaf}"
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

/// Hosts neighbors of the witness set plus hub on one leaf-branch path,
/// counted per set member.
fn path_neighbor_sum(g: &Graph, verts: &[usize], set: &[usize]) -> usize {
    set.iter()
        .map(|&u| verts.iter().filter(|&&x| g.has_edge(u, x)).count())
        .sum()
}

fn plain_path_violation(
    g: &Graph,
    d: &StemDecomposition,
    sel: &WitnessSelection,
) -> Option<CheckWitness> {
    let u1: BTreeSet<usize> = sel.witness_leaves().into_iter().collect();
    let mut set = sel.witness_leaves();
    set.push(sel.hub.expect("checked applicable"));
    for (&leaf, path) in d.leaf_paths() {
        if u1.contains(&leaf) {
            continue;
        }
        let sum = path_neighbor_sum(g, &path.vertices, &set);
        if sum > path.len() {
            return Some(CheckWitness {
                vertices: vec![leaf],
                detail: format!(
                    "witness neighbors on the path of {leaf} number {sum} over size {}",
                    path.len()
                ),
            });
        }
    }
    None
}

fn witness_path_bound_violation(
    g: &Graph,
    d: &StemDecomposition,
    sel: &WitnessSelection,
) -> Option<CheckWitness> {
    let mut set = sel.witness_leaves();
    set.push(sel.hub.expect("checked applicable"));
    for pair in sel.pairs.values() {
        for leaf in [pair.main, pair.partner] {
            let path = d.leaf_path(leaf).expect("witness leaves have paths");
            let sum = path_neighbor_sum(g, &path.vertices, &set);
            if sum + 1 > path.len() {
                return Some(CheckWitness {
                    vertices: vec![leaf],
                    detail: format!(
                        "witness neighbors on the path of {leaf} number {sum} over size {} minus one",
                        path.len()
                    ),
                });
            }
        }
    }
    None
}

fn leaf_branch_violation(
    g: &Graph,
    t: &SpanningTree,
    d: &StemDecomposition,
) -> Option<CheckWitness> {
    for &u in d.rstem_branch_vertices() {
        for &xi in d.rstem_leaves() {
            let path = t.path(xi, u);
            for x in d.rstem_neighbors(t, u) {
                if !path.contains(x) && g.has_edge(xi, x) {
                    return Some(CheckWitness {
                        vertices: vec![xi, x, u],
                        detail: format!(
                            "stem leaf {xi} touches {x} beyond branch vertex {u}"
                        ),
                    });
                }
            }
        }
    }
    None
}

fn saturation_violation(t: &SpanningTree, d: &StemDecomposition) -> Option<CheckWitness> {
    for &w in d.rstem_branch_vertices() {
        let neighbors = d.rstem_neighbors(t, w);
        let leaf_neighbors: Vec<usize> = neighbors
            .iter()
            .copied()
            .filter(|&x| d.rstem_degree(x) == 1)
            .collect();
        if leaf_neighbors.len() >= 3 {
            if let Some(&x) = neighbors.iter().find(|&&x| d.rstem_degree(x) != 1) {
                return Some(CheckWitness {
                    vertices: vec![w, x],
                    detail: format!(
                        "branch vertex {w} keeps stem neighbor {x} besides three leaf neighbors"
                    ),
                });
            }
            if leaf_neighbors.len() > 3 {
                return Some(CheckWitness {
                    vertices: vec![w],
                    detail: format!(
                        "branch vertex {w} has {} stem-leaf neighbors",
                        leaf_neighbors.len()
                    ),
                });
            }
        }
    }
    None
}

fn hub_reattachment_violation(
    g: &Graph,
    t: &SpanningTree,
    d: &StemDecomposition,
) -> Option<CheckWitness> {
    let w = *d
        .rstem_branch_vertices()
        .iter()
        .max_by_key(|&&v| (d.rstem_degree(v), std::cmp::Reverse(v)))
        .expect("checked applicable");
    for &u in d.rstem_branch_vertices() {
        if u == w {
            continue;
        }
        let path = t.path(u, w);
        for a in d.rstem_neighbors(t, u) {
            if !path.contains(a) && g.has_edge(w, a) {
                return Some(CheckWitness {
                    vertices: vec![u, a, w],
                    detail: format!(
                        "host edge joins max-degree branch {w} to {a} behind branch {u}"
                    ),
                });
            }
        }
    }
    None
}

fn leaf_cap_violation(g: &Graph, d: &StemDecomposition) -> Option<CheckWitness> {
    for &w in d.rstem_branch_vertices() {
        let count = d
            .rstem_leaves()
            .iter()
            .filter(|&&x| g.has_edge(w, x))
            .count();
        if count > 3 {
            return Some(CheckWitness {
                vertices: vec![w],
                detail: format!("branch vertex {w} neighbors {count} stem leaves in the host"),
            });
        }
    }
    None
}
