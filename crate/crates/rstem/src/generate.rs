//! Instance generators: the two sharpness families, seeded random
//! graphs, and line graphs.
//!
//! The sharpness families have fixed vertex layouts so that reports are
//! comparable across runs:
//!
//! Three-anchor family `family_h(m)`, 6m+4 vertices: for block
//! i in 0..3, vertices [2m*i, 2m*i+m) form clique R_i and
//! [2m*i+m, 2m*i+2m) form clique H_i; anchor x_i = 6m+i neighbors all of
//! block i; hub w = 6m+3 neighbors the three anchors.
//!
//! Ring family `family_g(l, m)` with k = 2l+1, (k+1)(2m+1)+l+1 vertices:
//! for block i in 0..=k, vertices [2m*i, 2m*i+m) form R_i and
//! [2m*i+m, 2m*i+2m) form H_i; anchor x_i = (k+1)*2m+i neighbors block i;
//! hub w_j = (k+1)*(2m+1)+j neighbors x_{2j} and x_{2j+1}, and the hubs
//! form a clique.

use rand::distributions::{Bernoulli, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Edge, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("no connected sample within {attempts} attempts")]
    RejectionLimit { attempts: usize },
    #[error("line graph needs at least one host edge")]
    EmptyEdgeSet,
}

fn clique_edges(vertices: std::ops::Range<usize>, edges: &mut Vec<(usize, usize)>) {
    let vs: Vec<usize> = vertices.collect();
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            edges.push((u, v));
        }
    }
}

/// The three-anchor sharpness family; see the module header for the
/// layout. K_{1,4}-free with 6m+4 vertices.
pub fn family_h(m: usize) -> Graph {
    assert!(m >= 1, "clique order must be positive");
    let x = |i: usize| 6 * m + i;
    let w = 6 * m + 3;
    let mut edges = Vec::new();
    for i in 0..3 {
        let base = 2 * m * i;
        clique_edges(base..base + m, &mut edges);
        clique_edges(base + m..base + 2 * m, &mut edges);
        for v in base..base + 2 * m {
            edges.push((x(i), v));
        }
        edges.push((x(i), w));
    }
    Graph::from_edges(6 * m + 4, edges).expect("family layout is valid")
}

/// The ring sharpness family with k = 2l+1 anchors plus one; see the
/// module header for the layout. K_{1,4}-free with (k+1)(2m+1)+l+1
/// vertices.
pub fn family_g(l: usize, m: usize) -> Graph {
    assert!(l >= 1 && m >= 1, "parameters must be positive");
    let k = 2 * l + 1;
    let x = |i: usize| (k + 1) * 2 * m + i;
    let w = |j: usize| (k + 1) * (2 * m + 1) + j;
    let mut edges = Vec::new();
    for i in 0..=k {
        let base = 2 * m * i;
        clique_edges(base..base + m, &mut edges);
        clique_edges(base + m..base + 2 * m, &mut edges);
        for v in base..base + 2 * m {
            edges.push((x(i), v));
        }
    }
    clique_edges(w(0)..w(l) + 1, &mut edges);
    for j in 0..=l {
        edges.push((w(j), x(2 * j)));
        edges.push((w(j), x(2 * j + 1)));
    }
    Graph::from_edges((k + 1) * (2 * m + 1) + l + 1, edges).expect("family layout is valid")
}

const REJECTION_LIMIT: usize = 10_000;

/// Erdős–Rényi sample conditioned on connectivity by rejection, drawing
/// pairs in ascending order from one seeded stream.
pub fn random_connected(n: usize, p: f64, seed: u64) -> Result<Graph, GenerateError> {
    assert!(n >= 1, "need at least one vertex");
    assert!((0.0..=1.0).contains(&p), "probability out of range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coin = Bernoulli::new(p).expect("validated probability");
    for _ in 0..REJECTION_LIMIT {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if coin.sample(&mut rng) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, edges).expect("sampled pairs are simple");
        if crate::graph::is_connected(&g) {
            return Ok(g);
        }
    }
    Err(GenerateError::RejectionLimit { attempts: REJECTION_LIMIT })
}

/// Uniform random labeled tree by decoding a random Prüfer sequence.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    assert!(n >= 1, "need at least one vertex");
    if n == 1 {
        return Graph::from_edges(1, []).unwrap();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in &seq {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        edges.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.push(std::cmp::Reverse(s));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().unwrap();
    let std::cmp::Reverse(b) = leaves.pop().unwrap();
    edges.push((a, b));
    Graph::from_edges(n, edges).expect("Prüfer decoding yields a tree")
}

/// The line graph: one vertex per host edge (in host edge order),
/// adjacent when the host edges share an endpoint. Always claw-free.
pub fn line_graph(g: &Graph) -> Result<Graph, GenerateError> {
    if g.edge_count() == 0 {
        return Err(GenerateError::EmptyEdgeSet);
    }
    let index = |e: &Edge| g.edges().binary_search(e).expect("edge of the host");
    let mut pairs = Vec::new();
    for v in 0..g.n() {
        let incident: Vec<usize> = g
            .neighbors(v)
            .iter()
            .map(|&u| index(&Edge::new(u, v)))
            .collect();
        for (i, &a) in incident.iter().enumerate() {
            for &b in &incident[i + 1..] {
                pairs.push((a, b));
            }
        }
    }
    Ok(Graph::from_edges(g.edge_count(), pairs).expect("incidence pairs are simple"))
}
