//! Spanning trees and their anatomy.
//!
//! For a spanning tree T of a host graph G:
//!   - a leaf is a vertex of tree degree 1, a branch vertex one of tree
//!     degree >= 3;
//!   - the stem is T minus its leaves;
//!   - the reducible stem is the smallest subtree containing every branch
//!     vertex (empty when there are none, a single vertex when there is
//!     exactly one);
//!   - each leaf x owns a leaf-branch path: the path from x up to, but not
//!     including, the nearest branch vertex.
//!
//! The optimizer orders trees by a six-part vector, compared
//! lexicographically with smaller better: reducible-stem leaf count,
//! reducible-stem size, tree leaf count, total tree degree of the
//! reducible-stem leaves, then two maximized terms stored negated (the
//! witness-path span and the largest branch degree inside the reducible
//! stem).

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::graph::{Edge, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("expected {expected} edges for a spanning tree, got {actual}")]
    WrongEdgeCount { expected: usize, actual: usize },
    #[error("edge {0} is not an edge of the host graph")]
    NotHostEdge(Edge),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("edges do not connect all vertices")]
    NotSpanning,
}

/// A validated spanning tree of some host graph. Holds only its own
/// structure; operations that need the host take it as an argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    n: usize,
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl SpanningTree {
    /// Validates that `edges` are distinct host edges forming a spanning
    /// tree (right count plus connectivity implies acyclicity).
    pub fn from_edges(
        host: &Graph,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, TreeError> {
        let n = host.n();
        let mut list: Vec<Edge> = edges.into_iter().collect();
        list.sort_unstable();
        if list.len() + 1 != n.max(1) {
            return Err(TreeError::WrongEdgeCount {
                expected: n.saturating_sub(1),
                actual: list.len(),
            });
        }
        for w in list.windows(2) {
            if w[0] == w[1] {
                return Err(TreeError::DuplicateEdge(w[0]));
            }
        }
        for e in &list {
            if !host.has_edge(e.u(), e.v()) {
                return Err(TreeError::NotHostEdge(*e));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for e in &list {
            adj[e.u()].push(e.v());
            adj[e.v()].push(e.u());
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        // n-1 edges and connected together force a tree.
        let mut seen = vec![false; n];
        let mut count = 0;
        if n > 0 {
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            while let Some(u) = queue.pop_front() {
                count += 1;
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        if count != n {
            return Err(TreeError::NotSpanning);
        }
        Ok(SpanningTree { n, adj, edges: list })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && a < self.n && b < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    /// The unique path from `u` to `v`, oriented from `u`.
    pub fn path(&self, u: usize, v: usize) -> TreePath {
        assert!(u != v, "a path needs distinct endpoints");
        let mut parent = vec![usize::MAX; self.n];
        parent[u] = u;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        assert!(parent[v] != usize::MAX, "tree is connected");
        let mut verts = vec![v];
        let mut cur = v;
        while cur != u {
            cur = parent[cur];
            verts.push(cur);
        }
        verts.reverse();
        TreePath::new(verts)
    }

    pub fn decompose(&self) -> StemDecomposition {
        StemDecomposition::compute(self)
    }
}

/// Direction of a shifted-set query along a path.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Shift {
    /// Take predecessors: `{x- : x on the path, x not the start, x adjacent to the sources}`.
    Pred,
    /// Take successors: `{x+ : x on the path, x not the end, x adjacent to the sources}`.
    Succ,
}

/// An oriented path inside a tree, with successor/predecessor queries.
#[derive(Clone, Debug)]
pub struct TreePath {
    verts: Vec<usize>,
    pos: HashMap<usize, usize>,
}

impl TreePath {
    fn new(verts: Vec<usize>) -> Self {
        let pos = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        TreePath { verts, pos }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn first(&self) -> usize {
        self.verts[0]
    }

    pub fn last(&self) -> usize {
        *self.verts.last().unwrap()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.pos.contains_key(&v)
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.pos.get(&v).copied()
    }

    /// The next vertex toward the end, `None` for the last vertex or
    /// vertices off the path.
    pub fn successor(&self, v: usize) -> Option<usize> {
        let i = self.position(v)?;
        self.verts.get(i + 1).copied()
    }

    /// The previous vertex toward the start.
    pub fn predecessor(&self, v: usize) -> Option<usize> {
        let i = self.position(v)?;
        i.checked_sub(1).map(|j| self.verts[j])
    }

    /// The shifted neighbor set: vertices on the path adjacent in `g` to
    /// any source are replaced by their predecessor (resp. successor); the
    /// endpoint lacking that neighbor is skipped. Result is sorted and
    /// deduplicated.
    pub fn shifted_neighbors(&self, g: &Graph, sources: &[usize], shift: Shift) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &x) in self.verts.iter().enumerate() {
            if sources.iter().any(|&s| g.has_edge(s, x)) {
                match shift {
                    Shift::Pred => {
                        if i > 0 {
                            out.push(self.verts[i - 1]);
                        }
                    }
                    Shift::Succ => {
                        if i + 1 < self.verts.len() {
                            out.push(self.verts[i + 1]);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// The leaf-branch path of one leaf: `vertices[0]` is the leaf and the
/// last entry is tree-adjacent to `anchor`, the nearest branch vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafPath {
    pub anchor: usize,
    pub vertices: Vec<usize>,
}

impl LeafPath {
    pub fn leaf(&self) -> usize {
        self.vertices[0]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The vertex of the path that is tree-adjacent to the anchor.
    pub fn attachment(&self) -> usize {
        *self.vertices.last().unwrap()
    }
}

/// Leaves, branch vertices, stem, reducible stem, and leaf-branch paths
/// of one spanning tree.
#[derive(Clone, Debug)]
pub struct StemDecomposition {
    n: usize,
    leaves: Vec<usize>,
    branch_vertices: Vec<usize>,
    stem: Vec<usize>,
    rstem: Vec<usize>,
    in_rstem: Vec<bool>,
    rstem_degree: Vec<usize>,
    rstem_leaves: Vec<usize>,
    rstem_branch: Vec<usize>,
    leaf_paths: BTreeMap<usize, LeafPath>,
}

impl StemDecomposition {
    pub fn compute(t: &SpanningTree) -> Self {
        let n = t.n();
        let leaves: Vec<usize> = (0..n).filter(|&v| t.degree(v) == 1).collect();
        let branch_vertices: Vec<usize> = (0..n).filter(|&v| t.degree(v) >= 3).collect();
        let stem: Vec<usize> = (0..n).filter(|&v| t.degree(v) != 1).collect();

        // The reducible stem is what survives repeatedly deleting
        // non-branch vertices of current degree <= 1. With no branch
        // vertices everything goes; with exactly one, that vertex stays.
        let is_branch = {
            let mut b = vec![false; n];
            for &v in &branch_vertices {
                b[v] = true;
            }
            b
        };
        let mut deg: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n)
            .filter(|&v| deg[v] <= 1 && !is_branch[v])
            .collect();
        while let Some(v) = queue.pop_front() {
            if removed[v] {
                continue;
            }
            removed[v] = true;
            for &w in t.neighbors(v) {
                if !removed[w] {
                    deg[w] -= 1;
                    if deg[w] <= 1 && !is_branch[w] {
                        queue.push_back(w);
                    }
                }
            }
        }
        let rstem: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
        let mut in_rstem = vec![false; n];
        for &v in &rstem {
            in_rstem[v] = true;
        }
        let mut rstem_degree = vec![0usize; n];
        for &v in &rstem {
            rstem_degree[v] = t.neighbors(v).iter().filter(|&&w| in_rstem[w]).count();
        }
        // A one-vertex reducible stem has no leaves; a two-vertex one has two.
        let rstem_leaves: Vec<usize> = rstem
            .iter()
            .copied()
            .filter(|&v| rstem_degree[v] == 1)
            .collect();
        let rstem_branch: Vec<usize> = rstem
            .iter()
            .copied()
            .filter(|&v| rstem_degree[v] >= 3)
            .collect();

        let mut leaf_paths = BTreeMap::new();
        if !branch_vertices.is_empty() {
            for &leaf in &leaves {
                let mut verts = vec![leaf];
                let mut prev = leaf;
                let mut cur = t.neighbors(leaf)[0];
                while t.degree(cur) == 2 {
                    verts.push(cur);
                    let next = t
                        .neighbors(cur)
                        .iter()
                        .copied()
                        .find(|&w| w != prev)
                        .unwrap();
                    prev = cur;
                    cur = next;
                }
                debug_assert!(t.degree(cur) >= 3);
                leaf_paths.insert(leaf, LeafPath { anchor: cur, vertices: verts });
            }
        }

        StemDecomposition {
            n,
            leaves,
            branch_vertices,
            stem,
            rstem,
            in_rstem,
            rstem_degree,
            rstem_leaves,
            rstem_branch,
            leaf_paths,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }

    pub fn branch_vertices(&self) -> &[usize] {
        &self.branch_vertices
    }

    pub fn stem(&self) -> &[usize] {
        &self.stem
    }

    pub fn reducible_stem(&self) -> &[usize] {
        &self.rstem
    }

    pub fn in_reducible_stem(&self, v: usize) -> bool {
        self.in_rstem[v]
    }

    /// Degree of `v` within the reducible stem (0 off the stem).
    pub fn rstem_degree(&self, v: usize) -> usize {
        self.rstem_degree[v]
    }

    pub fn rstem_leaves(&self) -> &[usize] {
        &self.rstem_leaves
    }

    pub fn rstem_leaf_count(&self) -> usize {
        self.rstem_leaves.len()
    }

    /// Branch vertices of the reducible stem itself (stem degree >= 3).
    pub fn rstem_branch_vertices(&self) -> &[usize] {
        &self.rstem_branch
    }

    /// True when the reducible stem is a path (including the empty and
    /// single-vertex cases); equivalent to having at most two stem leaves.
    pub fn rstem_is_path(&self) -> bool {
        self.rstem_branch.is_empty()
    }

    pub fn leaf_path(&self, leaf: usize) -> Option<&LeafPath> {
        self.leaf_paths.get(&leaf)
    }

    /// Leaf-branch paths keyed by leaf; empty when the tree has no branch
    /// vertex. When nonempty the paths partition the vertices outside the
    /// reducible stem.
    pub fn leaf_paths(&self) -> &BTreeMap<usize, LeafPath> {
        &self.leaf_paths
    }

    /// Tree neighbors of `v` that lie in the reducible stem.
    pub fn rstem_neighbors(&self, t: &SpanningTree, v: usize) -> Vec<usize> {
        t.neighbors(v)
            .iter()
            .copied()
            .filter(|&w| self.in_rstem[w])
            .collect()
    }
}

/// Leaves of leaf-branch paths anchored at `anchor` whose host-graph
/// neighborhood avoids the rest of the reducible stem, sorted by
/// descending path length, then ascending leaf id. These are the leaves
/// eligible to witness the span term of the objective.
pub fn qualifying_leaves(g: &Graph, d: &StemDecomposition, anchor: usize) -> Vec<usize> {
    let mut out: Vec<(usize, usize)> = d
        .leaf_paths()
        .values()
        .filter(|p| p.anchor == anchor)
        .filter(|p| {
            !g.neighbors(p.leaf())
                .iter()
                .any(|&w| d.in_reducible_stem(w) && w != anchor)
        })
        .map(|p| (p.len(), p.leaf()))
        .collect();
    out.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    out.into_iter().map(|(_, leaf)| leaf).collect()
}

/// The six-part tree objective, compared lexicographically with smaller
/// better. Maximized terms are stored negated.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ObjectiveVector {
    v: [i64; 6],
}

impl ObjectiveVector {
    pub fn components(&self) -> [i64; 6] {
        self.v
    }

    pub fn rstem_leaf_count(&self) -> usize {
        self.v[0] as usize
    }

    pub fn rstem_size(&self) -> usize {
        self.v[1] as usize
    }

    pub fn tree_leaf_count(&self) -> usize {
        self.v[2] as usize
    }

    /// Total tree degree of the reducible-stem leaves.
    pub fn anchor_degree_sum(&self) -> u64 {
        self.v[3] as u64
    }

    /// Combined length of the two longest qualifying leaf-branch paths at
    /// each reducible-stem leaf (maximized).
    pub fn witness_span(&self) -> u64 {
        (-self.v[4]) as u64
    }

    /// Largest reducible-stem degree over its branch vertices (maximized).
    pub fn max_rstem_degree(&self) -> u64 {
        (-self.v[5]) as u64
    }
}

impl fmt::Display for ObjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rstem_leaves={} rstem_size={} tree_leaves={} anchor_degree_sum={} witness_span={} max_rstem_degree={}",
            self.rstem_leaf_count(),
            self.rstem_size(),
            self.tree_leaf_count(),
            self.anchor_degree_sum(),
            self.witness_span(),
            self.max_rstem_degree()
        )
    }
}

pub fn objective(g: &Graph, t: &SpanningTree) -> ObjectiveVector {
    objective_with(g, t, &t.decompose())
}

pub fn objective_with(g: &Graph, t: &SpanningTree, d: &StemDecomposition) -> ObjectiveVector {
    let c0 = d.rstem_leaf_count() as i64;
    let c1 = d.reducible_stem().len() as i64;
    let c2 = d.leaves().len() as i64;
    let c3: i64 = d.rstem_leaves().iter().map(|&v| t.degree(v) as i64).sum();
    let mut span: i64 = 0;
    for &anchor in d.rstem_leaves() {
        let q = qualifying_leaves(g, d, anchor);
        if q.len() >= 2 {
            span += d.leaf_path(q[0]).unwrap().len() as i64;
            span += d.leaf_path(q[1]).unwrap().len() as i64;
        }
    }
    let maxdeg = d
        .rstem_branch_vertices()
        .iter()
        .map(|&v| d.rstem_degree(v) as i64)
        .max()
        .unwrap_or(0);
    ObjectiveVector {
        v: [c0, c1, c2, c3, -span, -maxdeg],
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeParseError {
    #[error("line {line}: malformed tree edge, expected \"u v\"")]
    MalformedEdge { line: usize },
    #[error("line {line}: vertex {vertex} out of range for n={n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error(transparent)]
    Invalid(#[from] TreeError),
}

/// Parses a tree file: `#` comments and blank lines are ignored, every
/// other line is one tree edge `u v`. Validation against the host checks
/// the edge count, host membership, and connectivity.
pub fn parse_tree_list(host: &Graph, text: &str) -> Result<SpanningTree, TreeParseError> {
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = s.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(TreeParseError::MalformedEdge { line });
        }
        let u: usize = fields[0]
            .parse()
            .map_err(|_| TreeParseError::MalformedEdge { line })?;
        let v: usize = fields[1]
            .parse()
            .map_err(|_| TreeParseError::MalformedEdge { line })?;
        for x in [u, v] {
            if x >= host.n() {
                return Err(TreeParseError::VertexOutOfRange {
                    line,
                    vertex: x,
                    n: host.n(),
                });
            }
        }
        if u == v {
            return Err(TreeParseError::MalformedEdge { line });
        }
        edges.push(Edge::new(u, v));
    }
    Ok(SpanningTree::from_edges(host, edges)?)
}

pub fn format_tree_list(t: &SpanningTree, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    for e in t.edges() {
        out.push_str(&format!("{} {}\n", e.u(), e.v()));
    }
    out
}
