//! Girth, clique and induced-subgraph searches on [`Graph`].

use std::collections::VecDeque;

use crate::analyze::enumerate::{binomial, Budget};
use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::incidence::Graph;

/// Length of the shortest cycle, `None` for a forest.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.fill(usize::MAX);
        parent.fill(usize::MAX);
        dist[root] = 0;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            // a cycle through root cannot beat best past this depth
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for w in g.neighbors(u).iter() {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

/// Whether `g` contains a clique on `k` vertices.
pub fn has_k_clique(g: &Graph, k: usize) -> bool {
    fn extend(g: &Graph, cand: &BitRow, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        if cand.count() < need {
            return false;
        }
        let mut rest = cand.clone();
        for v in cand.iter() {
            rest.remove(v);
            if rest.count() + 1 < need {
                return false;
            }
            let mut next = rest.clone();
            next.intersect_with(g.neighbors(v));
            if extend(g, &next, need - 1) {
                return true;
            }
        }
        false
    }
    let n = g.vertex_count();
    if k == 0 {
        return true;
    }
    extend(g, &BitRow::from_indices(n, 0..n), k)
}

/// Maximum number of edges in an induced subgraph on `k` vertices, with
/// one such vertex set (lexicographically first).
pub fn max_induced_edges_with_witness(g: &Graph, k: usize, budget: Budget) -> Result<(usize, Vec<usize>)> {
    let n = g.vertex_count();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, max: n });
    }
    budget.check(binomial(n, k))?;
    struct Search<'a> {
        g: &'a Graph,
        k: usize,
        best: usize,
        best_set: Vec<usize>,
        chosen: Vec<usize>,
        set: BitRow,
    }
    impl Search<'_> {
        fn go(&mut self, next: usize, edges: usize) {
            let n = self.g.vertex_count();
            if self.chosen.len() == self.k {
                if edges > self.best || self.best_set.is_empty() {
                    self.best = edges;
                    self.best_set = self.chosen.clone();
                }
                return;
            }
            let left = self.k - self.chosen.len();
            // each remaining vertex adds at most (vertices already in) edges
            let have = self.chosen.len();
            let ceiling = edges + left * have + left * (left - 1) / 2;
            if !self.best_set.is_empty() && ceiling <= self.best {
                return;
            }
            for v in next..=n - left {
                let add = self.g.neighbors(v).intersection_count(&self.set);
                self.set.insert(v);
                self.chosen.push(v);
                self.go(v + 1, edges + add);
                self.chosen.pop();
                self.set.remove(v);
            }
        }
    }
    let mut s = Search {
        g,
        k,
        best: 0,
        best_set: Vec::new(),
        chosen: Vec::with_capacity(k),
        set: BitRow::new(n),
    };
    s.go(0, 0);
    Ok((s.best, s.best_set))
}

pub fn max_induced_edges(g: &Graph, k: usize, budget: Budget) -> Result<usize> {
    max_induced_edges_with_witness(g, k, budget).map(|(e, _)| e)
}
