//! Exact solvers for distance-independence statistics.
//!
//! `alpha(g, m)` is the largest size of a vertex set whose members are
//! pairwise at distance at least `m` (for `m = 2` this is the usual
//! independence number). `sigma(g, p, m)` is the smallest degree sum over
//! such sets of size exactly `p`, and is infinite when no such set exists;
//! vertices in different components count as arbitrarily far apart. Both
//! run branch and bound over the pairwise-compatibility relation and abort
//! with their best partial answer once a node budget is exhausted.

use std::fmt;

use thiserror::Error;

use crate::graph::{DistanceOracle, Graph};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Counts search-tree nodes; `charge` returns false once the limit is hit.
#[derive(Clone, Debug)]
pub struct NodeBudget {
    limit: u64,
    used: u64,
}

impl NodeBudget {
    pub fn new(limit: u64) -> Self {
        NodeBudget { limit, used: 0 }
    }

    pub fn charge(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

impl Default for NodeBudget {
    fn default() -> Self {
        NodeBudget::new(DEFAULT_NODE_BUDGET)
    }
}

/// The search stopped early; `partial` is the best answer found so far and
/// is only a bound on the true value.
#[derive(Debug, Clone, Error)]
#[error("node budget exhausted; partial result is a bound, not the exact value")]
pub struct BudgetExceeded<T: fmt::Debug> {
    pub partial: T,
}

/// A degree sum that may be infinite. `Infinite` compares greater than
/// every finite value, which is exactly how threshold checks want it.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Sigma {
    Finite(u64),
    Infinite,
}

impl Sigma {
    pub fn is_finite(&self) -> bool {
        matches!(self, Sigma::Finite(_))
    }

    /// Compares against a signed threshold (thresholds like `n - k + 1`
    /// can be non-positive on tiny graphs).
    pub fn at_least(&self, threshold: i64) -> bool {
        match self {
            Sigma::Infinite => true,
            Sigma::Finite(v) => {
                if threshold <= 0 {
                    true
                } else {
                    *v >= threshold as u64
                }
            }
        }
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sigma::Finite(v) => write!(f, "{v}"),
            Sigma::Infinite => write!(f, "inf"),
        }
    }
}

/// A set of vertices pairwise at distance >= m, in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScatterSet {
    pub vertices: Vec<usize>,
}

impl ScatterSet {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSumResult {
    pub value: Sigma,
    /// A minimizing set when the value is finite.
    pub witness: Option<Vec<usize>>,
}

/// True at `[u][v]` when u and v may share a set: distinct and at distance
/// >= m, with unreachable pairs counting as far apart.
fn compatibility(g: &Graph, m: usize) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut compat = vec![vec![false; n]; n];
    for u in 0..n {
        let oracle = DistanceOracle::new(g, u);
        for v in 0..n {
            compat[u][v] = u != v && oracle.distance(v).map_or(true, |d| d as usize >= m);
        }
    }
    compat
}

struct AlphaSearch<'a> {
    compat: &'a [Vec<bool>],
    budget: &'a mut NodeBudget,
    best: Vec<usize>,
    cur: Vec<usize>,
    exhausted: bool,
}

impl AlphaSearch<'_> {
    fn run(&mut self, cands: &[usize]) {
        if !self.budget.charge() {
            self.exhausted = true;
            return;
        }
        for (i, &v) in cands.iter().enumerate() {
            if self.exhausted {
                return;
            }
            if self.cur.len() + (cands.len() - i) <= self.best.len() {
                return;
            }
            self.cur.push(v);
            if self.cur.len() > self.best.len() {
                self.best = self.cur.clone();
            }
            let rest: Vec<usize> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&w| self.compat[v][w])
                .collect();
            self.run(&rest);
            self.cur.pop();
        }
    }
}

/// Maximum size of a set of vertices pairwise at distance >= m, together
/// with the first such set found in ascending-id search order.
pub fn alpha(
    g: &Graph,
    m: usize,
    budget: &mut NodeBudget,
) -> Result<ScatterSet, BudgetExceeded<ScatterSet>> {
    assert!(m >= 2, "distance bound must be at least 2");
    let compat = compatibility(g, m);
    let all: Vec<usize> = (0..g.n()).collect();
    let mut search = AlphaSearch {
        compat: &compat,
        budget,
        best: Vec::new(),
        cur: Vec::new(),
        exhausted: false,
    };
    search.run(&all);
    let result = ScatterSet {
        vertices: search.best,
    };
    if search.exhausted {
        Err(BudgetExceeded { partial: result })
    } else {
        Ok(result)
    }
}

struct SigmaSearch<'a> {
    g: &'a Graph,
    compat: &'a [Vec<bool>],
    budget: &'a mut NodeBudget,
    p: usize,
    best: Option<(u64, Vec<usize>)>,
    cur: Vec<usize>,
    exhausted: bool,
}

impl SigmaSearch<'_> {
    /// `cands` is kept sorted by (degree, id) so the cheapest-extension
    /// lower bound is a prefix sum.
    fn run(&mut self, cands: &[usize], sum: u64) {
        if !self.budget.charge() {
            self.exhausted = true;
            return;
        }
        if self.cur.len() == self.p {
            if self.best.as_ref().map_or(true, |(b, _)| sum < *b) {
                self.best = Some((sum, self.cur.clone()));
            }
            return;
        }
        let need = self.p - self.cur.len();
        if cands.len() < need {
            return;
        }
        if let Some((bound, _)) = &self.best {
            let cheapest: u64 = cands[..need]
                .iter()
                .map(|&v| self.g.degree(v) as u64)
                .sum();
            if sum + cheapest >= *bound {
                return;
            }
        }
        for (i, &v) in cands.iter().enumerate() {
            if self.exhausted {
                return;
            }
            if cands.len() - i < need {
                return;
            }
            self.cur.push(v);
            let rest: Vec<usize> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&w| self.compat[v][w])
                .collect();
            self.run(&rest, sum + self.g.degree(v) as u64);
            self.cur.pop();
        }
    }
}

/// Minimum degree sum over p-sets pairwise at distance >= m; infinite
/// when no such set exists.
pub fn sigma(
    g: &Graph,
    p: usize,
    m: usize,
    budget: &mut NodeBudget,
) -> Result<DegreeSumResult, BudgetExceeded<DegreeSumResult>> {
    assert!(p >= 2, "set size must be at least 2");
    assert!(m >= 2, "distance bound must be at least 2");
    let compat = compatibility(g, m);
    let mut all: Vec<usize> = (0..g.n()).collect();
    all.sort_by_key(|&v| (g.degree(v), v));
    let mut search = SigmaSearch {
        g,
        compat: &compat,
        budget,
        p,
        best: None,
        cur: Vec::new(),
        exhausted: false,
    };
    search.run(&all, 0);
    let result = match search.best {
        Some((value, witness)) => DegreeSumResult {
            value: Sigma::Finite(value),
            witness: Some(witness),
        },
        None => DegreeSumResult {
            value: Sigma::Infinite,
            witness: None,
        },
    };
    if search.exhausted {
        Err(BudgetExceeded { partial: result })
    } else {
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exhaustive_alpha(g: &Graph, m: usize) -> usize {
        let compat = compatibility(g, m);
        let n = g.n();
        assert!(n <= 20);
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let ok = vs
                .iter()
                .enumerate()
                .all(|(i, &u)| vs[i + 1..].iter().all(|&v| compat[u][v]));
            if ok {
                best = best.max(vs.len());
            }
        }
        best
    }

    #[test]
    fn alpha_on_small_named_graphs() {
        let mut b = NodeBudget::default();
        let c5 = Graph::cycle(5);
        assert_eq!(alpha(&c5, 2, &mut b).unwrap().size(), 2);
        assert_eq!(exhaustive_alpha(&c5, 2), 2);

        let p7 = Graph::path_graph(7);
        let far = alpha(&p7, 4, &mut b).unwrap();
        assert_eq!(far.size(), 2);
        assert_eq!(exhaustive_alpha(&p7, 4), 2);

        assert_eq!(alpha(&Graph::complete(6), 2, &mut b).unwrap().size(), 1);
    }

    #[test]
    fn alpha_witness_is_pairwise_far() {
        let g = Graph::cycle(8);
        let mut b = NodeBudget::default();
        let set = alpha(&g, 3, &mut b).unwrap();
        for (i, &u) in set.vertices.iter().enumerate() {
            for &v in &set.vertices[i + 1..] {
                let d = crate::graph::distance(&g, u, v).unwrap().unwrap();
                assert!(d >= 3);
            }
        }
    }

    #[test]
    fn sigma_is_infinite_exactly_when_alpha_is_small() {
        let k3 = Graph::complete(3);
        let mut b = NodeBudget::default();
        let r = sigma(&k3, 2, 2, &mut b).unwrap();
        assert_eq!(r.value, Sigma::Infinite);
        assert!(r.witness.is_none());

        // C_8 cannot host 7 pairwise-nonadjacent vertices either.
        let r = sigma(&Graph::cycle(8), 7, 2, &mut b).unwrap();
        assert_eq!(r.value, Sigma::Infinite);
    }

    #[test]
    fn sigma_matches_hand_count_on_cycle() {
        // In C_6 any 2 vertices at distance >= 2 have degree sum 4.
        let mut b = NodeBudget::default();
        let r = sigma(&Graph::cycle(6), 2, 2, &mut b).unwrap();
        assert_eq!(r.value, Sigma::Finite(4));
        let w = r.witness.unwrap();
        assert_eq!(w.len(), 2);
    }

    #[test]
    fn sigma_ordering_and_thresholds() {
        assert!(Sigma::Infinite > Sigma::Finite(u64::MAX));
        assert!(Sigma::Finite(9).at_least(9));
        assert!(!Sigma::Finite(9).at_least(10));
        assert!(Sigma::Infinite.at_least(1 << 40));
        assert!(Sigma::Finite(0).at_least(-3));
        assert_eq!(Sigma::Infinite.to_string(), "inf");
        assert_eq!(Sigma::Finite(14).to_string(), "14");
    }

    #[test]
    fn tiny_budget_reports_partial_answer() {
        let g = Graph::cycle(9);
        let mut b = NodeBudget::new(2);
        let err = alpha(&g, 2, &mut b).unwrap_err();
        assert!(err.partial.size() <= 4);
        let mut b = NodeBudget::new(1);
        assert!(sigma(&g, 3, 2, &mut b).is_err());
    }
}
