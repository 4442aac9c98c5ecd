//! Undirected simple graphs on dense integer vertex ids.
//!
//! Graphs are immutable after construction: neighbor lists are sorted,
//! edges are stored once as ordered pairs, and all queries are pure.
//! This is the interchange type for every other module in the crate.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// An undirected edge, stored with `u < v`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    /// Normalizes the endpoint order. Panics on a self-loop.
    pub fn new(a: usize, b: usize) -> Self {
        assert!(a != b, "self-loop at {a}");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    /// The endpoint that is not `x`. Panics if `x` is not an endpoint.
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else if x == self.v {
            self.u
        } else {
            panic!("vertex {x} is not on edge {self}")
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for n={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },
}

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a simple graph from unordered endpoint pairs.
    pub fn from_edges(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for (a, b) in pairs {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop { vertex: a });
            }
            let e = Edge::new(a, b);
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge { u: e.u, v: e.v });
            }
        }
        let edges: Vec<Edge> = seen.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, adj, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All edges in ascending `(u, v)` order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && a < self.n && b < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    pub fn degree_sum(&self, vs: &[usize]) -> u64 {
        vs.iter().map(|&v| self.degree(v) as u64).sum()
    }

    pub fn complete(n: usize) -> Self {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, pairs).unwrap()
    }

    pub fn path_graph(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let pairs = (1..n).map(|v| (v - 1, v)).chain([(0, n - 1)]);
        Graph::from_edges(n, pairs).unwrap()
    }

    /// The star `K_{1,t}` with center 0 and leaves `1..=t`.
    pub fn star(t: usize) -> Self {
        Graph::from_edges(t + 1, (1..=t).map(|v| (0, v))).unwrap()
    }
}

/// Hop distances from one source, computed by breadth-first search.
/// `None` means the vertex is unreachable.
#[derive(Clone, Debug)]
pub struct DistanceOracle {
    source: usize,
    dist: Vec<Option<u32>>,
}

impl DistanceOracle {
    pub fn new(g: &Graph, source: usize) -> Self {
        assert!(source < g.n(), "source {source} out of range");
        let mut dist = vec![None; g.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in g.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        DistanceOracle { source, dist }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn distance(&self, v: usize) -> Option<u32> {
        self.dist[v]
    }

    pub fn distances(&self) -> &[Option<u32>] {
        &self.dist
    }
}

/// Hop distance between `u` and `v`; `None` when they are in different
/// components.
pub fn distance(g: &Graph, u: usize, v: usize) -> Result<Option<u32>, GraphError> {
    for x in [u, v] {
        if x >= g.n() {
            return Err(GraphError::VertexOutOfRange { vertex: x, n: g.n() });
        }
    }
    Ok(DistanceOracle::new(g, u).distance(v))
}

pub fn is_connected(g: &Graph) -> bool {
    g.n() <= 1
        || DistanceOracle::new(g, 0)
            .distances()
            .iter()
            .all(|d| d.is_some())
}

/// An induced star: `center` is adjacent to every leaf and the leaves are
/// pairwise non-adjacent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarWitness {
    pub center: usize,
    pub leaves: Vec<usize>,
}

/// Searches for an induced `K_{1,t}`. Centers are scanned in ascending id
/// and leaf sets in lexicographic order, so the first witness is canonical.
/// Centers of degree below `t` are skipped.
pub fn find_induced_star(g: &Graph, t: usize) -> Option<StarWitness> {
    assert!(t >= 3, "induced-star checks need t >= 3");
    for c in 0..g.n() {
        if g.degree(c) < t {
            continue;
        }
        let mut chosen = Vec::with_capacity(t);
        if pick_independent(g, g.neighbors(c), 0, t, &mut chosen) {
            return Some(StarWitness { center: c, leaves: chosen });
        }
    }
    None
}

fn pick_independent(
    g: &Graph,
    pool: &[usize],
    from: usize,
    need: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == need {
        return true;
    }
    for i in from..pool.len() {
        if pool.len() - i < need - chosen.len() {
            break;
        }
        let cand = pool[i];
        if chosen.iter().all(|&x| !g.has_edge(x, cand)) {
            chosen.push(cand);
            if pick_independent(g, pool, i + 1, need, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

pub fn is_k1t_free(g: &Graph, t: usize) -> bool {
    find_induced_star(g, t).is_none()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed header, expected \"n m\"")]
    MalformedHeader { line: usize },
    #[error("line {line}: malformed edge, expected \"u v\"")]
    MalformedEdge { line: usize },
    #[error("line {line}: vertex {vertex} out of range for n={n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: header declared {expected} edges, found {found}")]
    EdgeCountMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
}

/// Parses the edge-list format: optional `#` comment lines, one `n m`
/// header, then exactly `m` lines `u v`. Blank lines are ignored.
/// Endpoint order within a line does not matter.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut seen = BTreeSet::new();
    let mut pairs = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = s.split_whitespace().collect();
        match header {
            None => {
                if fields.len() != 2 {
                    return Err(ParseError::MalformedHeader { line });
                }
                let n = fields[0]
                    .parse()
                    .map_err(|_| ParseError::MalformedHeader { line })?;
                let m = fields[1]
                    .parse()
                    .map_err(|_| ParseError::MalformedHeader { line })?;
                header = Some((n, m));
            }
            Some((n, m)) => {
                if pairs.len() == m {
                    return Err(ParseError::EdgeCountMismatch {
                        line,
                        expected: m,
                        found: m + 1,
                    });
                }
                if fields.len() != 2 {
                    return Err(ParseError::MalformedEdge { line });
                }
                let u: usize = fields[0]
                    .parse()
                    .map_err(|_| ParseError::MalformedEdge { line })?;
                let v: usize = fields[1]
                    .parse()
                    .map_err(|_| ParseError::MalformedEdge { line })?;
                for x in [u, v] {
                    if x >= n {
                        return Err(ParseError::VertexOutOfRange { line, vertex: x, n });
                    }
                }
                if u == v {
                    return Err(ParseError::SelfLoop { line, vertex: u });
                }
                let e = Edge::new(u, v);
                if !seen.insert(e) {
                    return Err(ParseError::DuplicateEdge {
                        line,
                        u: e.u(),
                        v: e.v(),
                    });
                }
                pairs.push(e.endpoints());
            }
        }
    }
    let (n, m) = header.ok_or(ParseError::MalformedHeader { line: last_line + 1 })?;
    if pairs.len() < m {
        return Err(ParseError::EdgeCountMismatch {
            line: last_line + 1,
            expected: m,
            found: pairs.len(),
        });
    }
    Ok(Graph::from_edges(n, pairs).expect("validated line by line"))
}

/// Writes the edge-list format; `comments` become leading `#` lines.
pub fn format_edge_list(g: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&format!("{} {}\n", g.n(), g.edge_count()));
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.u(), e.v()));
    }
    out
}
