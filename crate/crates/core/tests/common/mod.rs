//! Brute-force oracles and fixtures shared by the integration tests.
//!
//! Everything here works from raw node sets and edge lists with bitmasks,
//! so it shares no code with the library's enumeration or matching.

#![allow(dead_code)]

use frepkit::construct::{cage, complete, complete_bipartite, cycle, turan, CageId};
use frepkit::incidence::from_graph;
use frepkit::{FrCode, Graph};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn symbol_mask(set: &[usize]) -> u128 {
    set.iter().fold(0u128, |m, &j| m | 1 << j)
}

/// `M(k)` for every `k = 1..=n` (index `k - 1`) over all `2^n` node subsets.
pub fn brute_file_sizes(code: &FrCode) -> Vec<usize> {
    let n = code.n();
    assert!(n <= 20 && code.theta() <= 128, "oracle limited to small codes");
    let rows: Vec<u128> = code.node_sets().iter().map(|s| symbol_mask(s)).collect();
    let mut best = vec![usize::MAX; n + 1];
    let mut unions = vec![0u128; 1 << n];
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        let u = unions[mask & (mask - 1)] | rows[low];
        unions[mask] = u;
        let k = mask.count_ones() as usize;
        best[k] = best[k].min(u.count_ones() as usize);
    }
    best[1..].to_vec()
}

/// Most edges induced by any `k` vertices, for `k = 1..=v` (index `k - 1`).
pub fn brute_max_edges(g: &Graph) -> Vec<usize> {
    let v = g.vertex_count();
    assert!(v <= 22);
    let mut best = vec![0usize; v + 1];
    for mask in 1u32..1 << v {
        let e = g
            .edges()
            .iter()
            .filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1)
            .count();
        let k = mask.count_ones() as usize;
        best[k] = best[k].max(e);
    }
    best[1..].to_vec()
}

/// Clique number by checking every vertex subset.
pub fn brute_clique_number(g: &Graph) -> usize {
    let v = g.vertex_count();
    let mut adj = vec![0u32; v];
    for &(a, b) in g.edges() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let mut best = 1;
    for mask in 1u32..1 << v {
        let k = mask.count_ones() as usize;
        if k <= best {
            continue;
        }
        if (0..v).filter(|&i| mask >> i & 1 == 1).all(|i| (adj[i] | 1 << i) & mask == mask) {
            best = k;
        }
    }
    best
}

/// Largest `t` such that every symbol set of size `<= t` has at least as
/// many holders as members, by checking all `2^theta` symbol sets.
pub fn brute_batch_t(code: &FrCode) -> usize {
    let theta = code.theta();
    assert!(theta <= 24);
    let mut holders = vec![0u64; theta];
    for (i, set) in code.node_sets().iter().enumerate() {
        for &j in set {
            holders[j] |= 1 << i;
        }
    }
    let mut smallest_violation = theta + 1;
    let mut nb = vec![0u64; 1 << theta];
    for mask in 1usize..1 << theta {
        let low = mask.trailing_zeros() as usize;
        let g = nb[mask & (mask - 1)] | holders[low];
        nb[mask] = g;
        let s = mask.count_ones() as usize;
        if (g.count_ones() as usize) < s {
            smallest_violation = smallest_violation.min(s);
        }
    }
    smallest_violation - 1
}

/// Distinct nodes holding any of `symbols`.
pub fn neighborhood(code: &FrCode, symbols: &[usize]) -> usize {
    let wanted = symbol_mask(symbols);
    code.node_sets().iter().filter(|s| symbol_mask(s) & wanted != 0).count()
}

/// A random `d`-regular simple graph from the pairing model, if one is
/// found within a few attempts.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Option<Graph> {
    if n * d % 2 != 0 || d >= n {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        stubs.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = stubs.chunks(2).map(|p| (p[0].min(p[1]), p[0].max(p[1]))).collect();
        edges.sort_unstable();
        let simple = edges.iter().all(|&(a, b)| a != b) && edges.windows(2).all(|w| w[0] != w[1]);
        if simple {
            return Graph::new(n, edges).ok();
        }
    }
    None
}

/// Regular graphs on at most 12 vertices from every generator, plus
/// seeded random 3- and 4-regular graphs.
pub fn graph_zoo() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 2..=12 {
        for r in 2..n {
            if n % r == 0 {
                out.push((format!("turan({n},{r})"), turan(n, r).unwrap()));
            }
        }
    }
    for n in 3..=12 {
        out.push((format!("complete({n})"), complete(n).unwrap()));
        out.push((format!("cycle({n})"), cycle(n).unwrap()));
    }
    for a in 1..=6 {
        out.push((format!("bipartite({a})"), complete_bipartite(a).unwrap()));
    }
    out.push(("petersen".into(), cage(CageId::Petersen)));
    for n in 6..=12 {
        for d in [3, 4] {
            for seed in 0..3 {
                if let Some(g) = random_regular(n, d, seed * 100 + n as u64) {
                    out.push((format!("random({n},{d},#{seed})"), g));
                }
            }
        }
    }
    out
}

pub fn zoo_codes() -> Vec<(String, Graph, FrCode)> {
    graph_zoo()
        .into_iter()
        .map(|(name, g)| {
            let c = from_graph(&g).unwrap();
            (name, g, c)
        })
        .collect()
}

/// A TD(3,4) written out by hand: groups {1..4}, {5..8}, {9..12};
/// block `B_i` is entry `i - 1`.
pub const TD34_BLOCKS: [[usize; 3]; 16] = [
    [1, 5, 9],
    [1, 6, 10],
    [1, 7, 11],
    [1, 8, 12],
    [2, 5, 10],
    [2, 6, 9],
    [2, 7, 12],
    [2, 8, 11],
    [3, 5, 12],
    [3, 6, 11],
    [3, 7, 10],
    [3, 8, 9],
    [4, 5, 11],
    [4, 6, 12],
    [4, 7, 9],
    [4, 8, 10],
];

/// Nodes are the 12 points, symbols the 16 blocks (0-based).
pub fn td34_fixture() -> FrCode {
    let blocks: Vec<Vec<usize>> = TD34_BLOCKS.iter().map(|b| b.iter().map(|p| p - 1).collect()).collect();
    FrCode::from_incidence(12, &blocks).unwrap()
}

/// Moore bound written out directly from the tree-counting argument.
pub fn moore_oracle(d: u64, g: u64) -> u64 {
    if g % 2 == 1 {
        // vertices within distance (g-1)/2 of a vertex
        let mut total = 1;
        let mut layer = d;
        for _ in 0..(g - 1) / 2 {
            total += layer;
            layer *= d - 1;
        }
        total
    } else {
        // vertices within distance g/2 - 1 of an edge
        let mut total = 2;
        let mut layer = 2 * (d - 1);
        for _ in 0..g / 2 - 1 {
            total += layer;
            layer *= d - 1;
        }
        total
    }
}

/// `M(k)` by walking every `k`-subset in lexicographic order, for codes
/// with at most 64 symbols.
pub fn naive_file_size(code: &FrCode, k: usize) -> usize {
    assert!(code.theta() <= 64);
    let rows: Vec<u64> = code.node_sets().iter().map(|s| s.iter().fold(0u64, |m, &j| m | 1 << j)).collect();
    let n = rows.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut best = usize::MAX;
    loop {
        let u = idx.iter().fold(0u64, |m, &i| m | rows[i]);
        best = best.min(u.count_ones() as usize);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { break };
        idx[i] += 1;
        for x in i + 1..k {
            idx[x] = idx[x - 1] + 1;
        }
    }
    best
}
