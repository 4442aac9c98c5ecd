//! Exhaustive ground truth for small hosts.
//!
//! Spanning trees are enumerated by include/exclude recursion over the
//! sorted edge list: each edge is either contracted into the growing
//! forest (skipped when it would close a cycle) or discarded (pruned when
//! the remaining edges can no longer connect the graph). Every spanning
//! tree is visited exactly once. The count is cross-checked by an
//! independent route, fraction-free determinant evaluation of a Laplacian
//! minor in exact integer arithmetic.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use thiserror::Error;

use crate::graph::{Edge, Graph};
use crate::tree::SpanningTree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph is not connected")]
    Disconnected,
}

/// Caps for one enumeration run.
#[derive(Copy, Clone, Debug)]
pub struct EnumerationBudget {
    pub max_trees: u64,
    pub seconds: f64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_trees: 1_000_000, seconds: 60.0 }
    }
}

/// Why an enumeration stopped.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EnumerationEnd {
    /// Every spanning tree was visited.
    Exhausted,
    /// The visitor returned false.
    VisitorStopped,
    /// The tree cap fired; the count is partial.
    TreeBudget,
    /// The wall-clock cap fired; the count is partial.
    TimeLimit,
}

#[derive(Copy, Clone, Debug)]
pub struct EnumerationOutcome {
    pub trees_seen: u64,
    pub end: EnumerationEnd,
}

/// Union-find without path compression so unions roll back in O(1).
struct RollbackDsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    merged: Vec<usize>,
}

impl RollbackDsu {
    fn new(n: usize) -> Self {
        RollbackDsu { parent: (0..n).collect(), size: vec![1; n], merged: Vec::new() }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Returns false (and records nothing) when both sides already share
    /// a component.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.merged.push(rb);
        true
    }

    fn rollback(&mut self) {
        let rb = self.merged.pop().expect("rollback matches a union");
        let ra = self.parent[rb];
        self.parent[rb] = rb;
        self.size[ra] -= self.size[rb];
    }
}

struct Enumerator<'a, F> {
    g: &'a Graph,
    edges: &'a [Edge],
    dsu: RollbackDsu,
    included: Vec<Edge>,
    visitor: F,
    trees_seen: u64,
    max_trees: u64,
    deadline: Instant,
    ticks: u32,
    end: Option<EnumerationEnd>,
}

impl<F: FnMut(&SpanningTree) -> bool> Enumerator<'_, F> {
    fn run(&mut self) {
        self.descend(0);
        if self.end.is_none() {
            self.end = Some(EnumerationEnd::Exhausted);
        }
    }

    fn descend(&mut self, next: usize) {
        if self.end.is_some() {
            return;
        }
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks % 256 == 0 && Instant::now() >= self.deadline {
            self.end = Some(EnumerationEnd::TimeLimit);
            return;
        }
        if self.included.len() + 1 == self.g.n().max(1) {
            self.visit();
            return;
        }
        if next == self.edges.len() {
            return;
        }
        let e = self.edges[next];
        if self.dsu.union(e.u(), e.v()) {
            self.included.push(e);
            self.descend(next + 1);
            self.included.pop();
            self.dsu.rollback();
            if self.end.is_some() {
                return;
            }
        }
        if self.connectable_without(next) {
            self.descend(next + 1);
        }
    }

    /// Whether included edges plus the edges after `skipped` still span
    /// one component.
    fn connectable_without(&self, skipped: usize) -> bool {
        let n = self.g.n();
        let mut adj = vec![Vec::new(); n];
        for e in self.included.iter().chain(&self.edges[skipped + 1..]) {
            adj[e.u()].push(e.v());
            adj[e.v()].push(e.u());
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    fn visit(&mut self) {
        let tree = SpanningTree::from_edges(self.g, self.included.iter().copied())
            .expect("enumerated edges form a spanning tree");
        self.trees_seen += 1;
        if !(self.visitor)(&tree) {
            self.end = Some(EnumerationEnd::VisitorStopped);
        } else if self.trees_seen == self.max_trees {
            self.end = Some(EnumerationEnd::TreeBudget);
        }
    }
}

/// Calls `visitor` on every spanning tree exactly once, in a fixed order,
/// until exhaustion, a false return, or a budget cap. The outcome carries
/// the tree count and why the run ended.
pub fn enumerate_spanning_trees<F: FnMut(&SpanningTree) -> bool>(
    g: &Graph,
    budget: EnumerationBudget,
    visitor: F,
) -> Result<EnumerationOutcome, OracleError> {
    if !crate::graph::is_connected(g) {
        return Err(OracleError::Disconnected);
    }
    let mut enumerator = Enumerator {
        g,
        edges: g.edges(),
        dsu: RollbackDsu::new(g.n()),
        included: Vec::with_capacity(g.n().saturating_sub(1)),
        visitor,
        trees_seen: 0,
        max_trees: budget.max_trees.max(1),
        deadline: Instant::now() + std::time::Duration::from_secs_f64(budget.seconds.max(0.0)),
        ticks: 0,
        end: None,
    };
    enumerator.run();
    Ok(EnumerationOutcome {
        trees_seen: enumerator.trees_seen,
        end: enumerator.end.expect("run sets an end"),
    })
}

/// Exact number of spanning trees by fraction-free elimination on a
/// Laplacian minor. Zero for disconnected graphs, one for trivial ones.
/// Independent of the enumeration path above.
pub fn spanning_tree_count(g: &Graph) -> BigUint {
    let n = g.n();
    if n <= 1 {
        return BigUint::from(1u32);
    }
    let k = n - 1;
    // Laplacian with row and column of vertex 0 removed.
    let mut m: Vec<Vec<BigInt>> = vec![vec![BigInt::from(0); k]; k];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::from(g.degree(i + 1) as i64);
    }
    for e in g.edges() {
        if e.u() >= 1 {
            m[e.u() - 1][e.v() - 1] = BigInt::from(-1);
            m[e.v() - 1][e.u() - 1] = BigInt::from(-1);
        }
    }
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for i in 0..k {
        if m[i][i] == BigInt::from(0) {
            match (i + 1..k).find(|&r| m[r][i] != BigInt::from(0)) {
                Some(r) => {
                    m.swap(i, r);
                    sign = -sign;
                }
                None => return BigUint::from(0u32),
            }
        }
        for r in i + 1..k {
            for c in i + 1..k {
                let num = &m[r][c] * &m[i][i] - &m[r][i] * &m[i][c];
                m[r][c] = num / &prev;
            }
            m[r][i] = BigInt::from(0);
        }
        prev = m[i][i].clone();
    }
    let det = if sign < 0 { -prev } else { prev };
    det.to_biguint().expect("tree count is non-negative")
}

/// How trustworthy a minimum from [`min_rstem_leaves`] is.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MinStatus {
    /// True minimum over all spanning trees.
    Exact,
    /// Search stopped once the requested target was met; the true
    /// minimum may be lower but the target is certified.
    ReachedTarget,
    /// A budget cap fired first; the value is only an upper bound.
    Truncated,
}

#[derive(Clone, Debug)]
pub struct MinLeafSearch {
    pub min: usize,
    pub tree: SpanningTree,
    pub trees_seen: u64,
    pub status: MinStatus,
}

/// Minimum reducible-stem leaf count over all spanning trees, with the
/// first tree attaining it. Passing `stop_at` ends the search as soon as
/// some tree reaches that many leaves or fewer; a minimum of zero always
/// ends it, and is exact either way.
pub fn min_rstem_leaves(
    g: &Graph,
    budget: EnumerationBudget,
    stop_at: Option<usize>,
) -> Result<MinLeafSearch, OracleError> {
    let mut best: Option<(usize, SpanningTree)> = None;
    let outcome = enumerate_spanning_trees(g, budget, |t| {
        let c0 = t.decompose().rstem_leaf_count();
        let improved = match &best {
            None => true,
            Some((b, _)) => c0 < *b,
        };
        if improved {
            best = Some((c0, t.clone()));
        }
        let reached = best.as_ref().map(|(b, _)| *b).unwrap();
        reached > 0 && stop_at.map_or(true, |target| reached > target)
    })?;
    let (min, tree) = best.expect("connected graphs have a spanning tree");
    let status = if min == 0 {
        MinStatus::Exact
    } else {
        match outcome.end {
            EnumerationEnd::Exhausted => MinStatus::Exact,
            EnumerationEnd::VisitorStopped => MinStatus::ReachedTarget,
            EnumerationEnd::TreeBudget | EnumerationEnd::TimeLimit => MinStatus::Truncated,
        }
    };
    Ok(MinLeafSearch { min, tree, trees_seen: outcome.trees_seen, status })
}
