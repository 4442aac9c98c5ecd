//! Shared helpers for the integration suites: plain random graphs and
//! brute-force definitions to check the exact solvers against.

use rand::distributions::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rstem::graph::Graph;

/// Erdős–Rényi sample with no connectivity conditioning.
pub fn plain_random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coin = Bernoulli::new(p).expect("probability in range");
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if coin.sample(&mut rng) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("sampled pairs are simple")
}

fn pairwise_far(g: &Graph, vertices: &[usize], m: usize) -> bool {
    for (i, &u) in vertices.iter().enumerate() {
        for &v in &vertices[i + 1..] {
            // Unreachable pairs count as far apart.
            if let Some(d) = rstem::graph::distance(g, u, v).expect("vertices in range") {
                if (d as usize) < m {
                    return false;
                }
            }
        }
    }
    true
}

/// Largest set pairwise at distance at least m, by full subset search.
pub fn alpha_exhaustive(g: &Graph, m: usize) -> usize {
    let n = g.n();
    assert!(n <= 20, "subset search only meant for tiny graphs");
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let vertices: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        if vertices.len() > best && pairwise_far(g, &vertices, m) {
            best = vertices.len();
        }
    }
    best
}

/// Smallest degree sum over p-sets pairwise at distance at least m, by
/// full subset search; None when no such set exists.
pub fn sigma_exhaustive(g: &Graph, p: usize, m: usize) -> Option<u64> {
    let n = g.n();
    assert!(n <= 20, "subset search only meant for tiny graphs");
    let mut best: Option<u64> = None;
    for mask in 0u32..(1 << n) {
        let vertices: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        if vertices.len() != p || !pairwise_far(g, &vertices, m) {
            continue;
        }
        let sum: u64 = vertices.iter().map(|&v| g.degree(v) as u64).sum();
        best = Some(best.map_or(sum, |b: u64| b.min(sum)));
    }
    best
}
