//! FR codes as incidence structures.
//!
//! Nodes and symbols are 0-based in memory and 1-based in every text
//! artifact (`.frc` code files and `GRAPH` edge lists).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::bits::BitRow;
use crate::error::{Error, Result};

/// An `(n, alpha, rho)` fractional repetition code over `theta` symbols.
///
/// The declared parameters are kept as given; [`FrCode::validate`] checks
/// them against the node sets. Each node set is kept sorted so that text
/// output is canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrCode {
    theta: usize,
    alpha: usize,
    rho: usize,
    node_sets: Vec<Vec<usize>>,
    rows: Vec<BitRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    pub row_weights: bool,
    pub column_weights: bool,
    pub double_counting: bool,
    pub elements_distinct_in_range: bool,
    /// Largest `|N_i ∩ N_j|` over `i != j`; 0 for a single node.
    pub max_intersection: usize,
    /// Pairwise intersections are at most one, as universal goodness requires.
    pub intersection_at_most_one: bool,
}

impl CodeReport {
    /// All FR-code invariants hold.
    pub fn is_valid(&self) -> bool {
        self.row_weights && self.column_weights && self.double_counting && self.elements_distinct_in_range
    }
}

impl FrCode {
    /// Builds a code from 0-based node sets. Symbols outside `0..theta` are
    /// rejected here because they cannot be represented; every other
    /// invariant is left to [`FrCode::validate`].
    pub fn new(theta: usize, alpha: usize, rho: usize, node_sets: Vec<Vec<usize>>) -> Result<Self> {
        if node_sets.is_empty() {
            return Err(Error::params("a code needs at least one node"));
        }
        if theta == 0 || alpha == 0 || rho == 0 {
            return Err(Error::params("theta, alpha and rho must be positive"));
        }
        let mut node_sets = node_sets;
        let mut rows = Vec::with_capacity(node_sets.len());
        for (i, set) in node_sets.iter_mut().enumerate() {
            set.sort_unstable();
            if let Some(&bad) = set.iter().find(|&&j| j >= theta) {
                return Err(Error::params(format!(
                    "node {} references symbol {} outside 1..={theta}",
                    i + 1,
                    bad + 1
                )));
            }
            rows.push(BitRow::from_indices(theta, set.iter().copied()));
        }
        Ok(FrCode {
            theta,
            alpha,
            rho,
            node_sets,
            rows,
        })
    }

    /// Builds a code from a point/block incidence: node `i` stores the
    /// indices of the blocks containing point `i`.
    pub fn from_incidence(points: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut node_sets = vec![Vec::new(); points];
        for (b, block) in blocks.iter().enumerate() {
            for &p in block {
                if p >= points {
                    return Err(Error::InvalidDesign(format!("block {} has point {} out of range", b + 1, p + 1)));
                }
                node_sets[p].push(b);
            }
        }
        let alpha = node_sets.first().map_or(0, Vec::len);
        let rho = blocks.first().map_or(0, Vec::len);
        FrCode::new(blocks.len(), alpha, rho, node_sets)
    }

    pub fn n(&self) -> usize {
        self.node_sets.len()
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    /// 0-based sorted symbol indices of each node.
    pub fn node_sets(&self) -> &[Vec<usize>] {
        &self.node_sets
    }

    pub fn node_set(&self, node: usize) -> &[usize] {
        &self.node_sets[node]
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    /// Nodes holding `symbol`, ascending.
    pub fn holders(&self, symbol: usize) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.rows[i].contains(symbol)).collect()
    }

    /// For each symbol, the ascending list of nodes holding it.
    pub fn symbol_holders(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.theta];
        for (i, set) in self.node_sets.iter().enumerate() {
            for &j in set {
                out[j].push(i);
            }
        }
        for v in &mut out {
            v.dedup();
        }
        out
    }

    pub fn validate(&self) -> CodeReport {
        let n = self.n();
        let row_weights = self.node_sets.iter().all(|s| s.len() == self.alpha);
        let elements_distinct_in_range = self
            .node_sets
            .iter()
            .all(|s| s.windows(2).all(|w| w[0] != w[1]) && s.iter().all(|&j| j < self.theta));
        let mut col = vec![0usize; self.theta];
        for s in &self.node_sets {
            for &j in s {
                col[j] += 1;
            }
        }
        let column_weights = col.iter().all(|&c| c == self.rho);
        let double_counting = n * self.alpha == self.rho * self.theta;
        let mut max_intersection = 0;
        for i in 0..n {
            for j in i + 1..n {
                max_intersection = max_intersection.max(self.rows[i].intersection_count(&self.rows[j]));
            }
        }
        CodeReport {
            row_weights,
            column_weights,
            double_counting,
            elements_distinct_in_range,
            max_intersection,
            intersection_at_most_one: max_intersection <= 1,
        }
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let r = self.validate();
        if r.is_valid() {
            Ok(())
        } else {
            Err(Error::params(format!("code is not a valid FR code: {r:?}")))
        }
    }

    /// The graph whose vertices are nodes and whose edges are symbols, for
    /// codes with repetition degree 2. Parallel edges are rejected.
    pub fn to_graph(&self) -> Result<Graph> {
        if self.rho != 2 {
            return Err(Error::params(format!("code has rho = {}, a graph needs rho = 2", self.rho)));
        }
        let mut edges = Vec::with_capacity(self.theta);
        for (j, h) in self.symbol_holders().into_iter().enumerate() {
            match h.as_slice() {
                [u, v] => edges.push((*u, *v)),
                _ => {
                    return Err(Error::params(format!(
                        "symbol {} is held by {} nodes, expected 2",
                        j + 1,
                        h.len()
                    )))
                }
            }
        }
        Graph::new(self.n(), edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("FRC {} {} {} {}\n", self.n(), self.theta, self.alpha, self.rho);
        for set in &self.node_sets {
            let mut first = true;
            for &j in set {
                if !first {
                    s.push(' ');
                }
                first = false;
                let _ = write!(s, "{}", j + 1);
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.split('\n');
        let header = lines.next().unwrap_or("");
        let fields: Vec<&str> = header.split_ascii_whitespace().collect();
        if fields.len() != 5 || fields[0] != "FRC" {
            return Err(Error::parse(1, "expected header \"FRC n theta alpha rho\""));
        }
        let mut nums = [0usize; 4];
        for (slot, f) in nums.iter_mut().zip(&fields[1..]) {
            *slot = f
                .parse()
                .map_err(|_| Error::parse(1, format!("header field {f:?} is not a non-negative integer")))?;
        }
        let [n, theta, alpha, rho] = nums;
        if n == 0 || theta == 0 || alpha == 0 || rho == 0 {
            return Err(Error::parse(1, "header parameters must be positive"));
        }
        let body: Vec<&str> = lines.collect();
        // A trailing newline leaves one empty element at the end.
        let body = match body.split_last() {
            Some((last, rest)) if last.is_empty() => rest,
            _ => &body[..],
        };
        if body.len() != n {
            return Err(Error::parse(
                body.len().min(n) + 2,
                format!("expected {n} node lines, found {}", body.len()),
            ));
        }
        let mut node_sets = Vec::with_capacity(n);
        for (i, line) in body.iter().enumerate() {
            let lineno = i + 2;
            let mut set = Vec::new();
            for tok in line.split_ascii_whitespace() {
                let j: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("symbol {tok:?} is not an integer")))?;
                if j == 0 || j > theta {
                    return Err(Error::parse(lineno, format!("symbol {j} outside 1..={theta}")));
                }
                set.push(j - 1);
            }
            node_sets.push(set);
        }
        FrCode::new(theta, alpha, rho, node_sets)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        FrCode::from_text(&text).map_err(|e| e.with_path(path))
    }
}

/// A simple undirected graph on vertices `0..v`. Edges are stored with
/// `u < v` in lexicographic order, which fixes symbol numbering in
/// [`from_graph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    v: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<BitRow>,
}

impl Graph {
    pub fn new(v: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut norm = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::params(format!("self-loop at vertex {}", a + 1)));
            }
            if a >= v || b >= v {
                return Err(Error::params(format!("edge {}-{} outside 1..={v}", a + 1, b + 1)));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::params(format!("duplicate edge {}-{}", w[0].0 + 1, w[0].1 + 1)));
        }
        let mut adj = vec![BitRow::new(v); v];
        for &(a, b) in &norm {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        Ok(Graph { v, edges: norm, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &BitRow {
        &self.adj[u]
    }

    pub fn adjacent(&self, u: usize, w: usize) -> bool {
        self.adj[u].contains(w)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count()
    }

    /// The common degree, or the first pair of vertices whose degrees differ.
    pub fn regular_degree(&self) -> Result<usize> {
        let d0 = if self.v == 0 { 0 } else { self.degree(0) };
        for u in 1..self.v {
            let d = self.degree(u);
            if d != d0 {
                return Err(Error::NotRegular {
                    u: 1,
                    deg_u: d0,
                    v: u + 1,
                    deg_v: d,
                });
            }
        }
        Ok(d0)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("GRAPH {} {}\n", self.v, self.edges.len());
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "{} {}", a + 1, b + 1);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().unwrap_or("").split_ascii_whitespace().collect();
        if header.len() != 3 || header[0] != "GRAPH" {
            return Err(Error::parse(1, "expected header \"GRAPH v e\""));
        }
        let v: usize = header[1].parse().map_err(|_| Error::parse(1, "bad vertex count"))?;
        let e: usize = header[2].parse().map_err(|_| Error::parse(1, "bad edge count"))?;
        let mut edges = Vec::with_capacity(e);
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            if line.trim().is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_ascii_whitespace()
                .map(|t| t.parse().map_err(|_| Error::parse(lineno, format!("bad vertex {t:?}"))))
                .collect::<Result<_>>()?;
            let [a, b] = nums[..] else {
                return Err(Error::parse(lineno, "expected \"u v\""));
            };
            if a == 0 || b == 0 || a > v || b > v {
                return Err(Error::parse(lineno, format!("vertex outside 1..={v}")));
            }
            if a >= b {
                return Err(Error::parse(lineno, "edge lines must have u < v"));
            }
            edges.push((a - 1, b - 1));
        }
        if edges.len() != e {
            return Err(Error::parse(edges.len() + 2, format!("expected {e} edge lines, found {}", edges.len())));
        }
        Graph::new(v, edges).map_err(|err| match err {
            Error::Params(msg) => Error::parse(1, msg),
            other => other,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Graph::from_text(&text).map_err(|e| e.with_path(path))
    }
}

/// A transversal design TD(ell, h) on points `0..ell*h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalDesign {
    pub ell: usize,
    pub h: usize,
    pub groups: Vec<Vec<usize>>,
    pub blocks: Vec<Vec<usize>>,
}

impl TransversalDesign {
    /// Checks all five design axioms and the block count, naming the first
    /// one violated.
    pub fn check(&self) -> Result<()> {
        let (ell, h) = (self.ell, self.h);
        let points = ell * h;
        if ell == 0 || h == 0 {
            return Err(Error::InvalidDesign("ell and h must be positive".into()));
        }
        if self.groups.len() != ell {
            return Err(Error::InvalidDesign(format!("expected {ell} groups, found {}", self.groups.len())));
        }
        let mut group_of = vec![usize::MAX; points];
        for (gi, g) in self.groups.iter().enumerate() {
            if g.len() != h {
                return Err(Error::InvalidDesign(format!("group {} has {} points, expected {h}", gi + 1, g.len())));
            }
            for &p in g {
                if p >= points {
                    return Err(Error::InvalidDesign(format!("group {} has point {} out of range", gi + 1, p + 1)));
                }
                if group_of[p] != usize::MAX {
                    return Err(Error::InvalidDesign(format!("groups do not partition the points: point {} repeats", p + 1)));
                }
                group_of[p] = gi;
            }
        }
        for (bi, b) in self.blocks.iter().enumerate() {
            if b.len() != ell {
                return Err(Error::InvalidDesign(format!("block {} has size {}, expected {ell}", bi + 1, b.len())));
            }
            let mut seen = vec![false; ell];
            for &p in b {
                if p >= points {
                    return Err(Error::InvalidDesign(format!("block {} has point {} out of range", bi + 1, p + 1)));
                }
                let g = group_of[p];
                if seen[g] {
                    return Err(Error::InvalidDesign(format!(
                        "block {} meets group {} more than once",
                        bi + 1,
                        g + 1
                    )));
                }
                seen[g] = true;
            }
        }
        let mut pair = vec![0u32; points * points];
        for b in &self.blocks {
            for (x, &p) in b.iter().enumerate() {
                for &q in &b[x + 1..] {
                    pair[p * points + q] += 1;
                    pair[q * points + p] += 1;
                }
            }
        }
        for p in 0..points {
            for q in p + 1..points {
                if group_of[p] != group_of[q] && pair[p * points + q] != 1 {
                    return Err(Error::InvalidDesign(format!(
                        "points {} and {} from different groups share {} blocks, expected 1",
                        p + 1,
                        q + 1,
                        pair[p * points + q]
                    )));
                }
            }
        }
        if self.blocks.len() != h * h {
            return Err(Error::InvalidDesign(format!("expected {} blocks, found {}", h * h, self.blocks.len())));
        }
        Ok(())
    }

    /// Splits the blocks into parallel classes (each a partition of the
    /// points) if the design is resolvable, using a greedy scan in block
    /// order.
    pub fn parallel_classes(&self) -> Option<Vec<Vec<usize>>> {
        let points = self.ell * self.h;
        let mut used = vec![false; self.blocks.len()];
        let mut classes = Vec::new();
        for start in 0..self.blocks.len() {
            if used[start] {
                continue;
            }
            let mut covered = BitRow::new(points);
            let mut class = Vec::new();
            for b in start..self.blocks.len() {
                if used[b] || self.blocks[b].iter().any(|&p| covered.contains(p)) {
                    continue;
                }
                for &p in &self.blocks[b] {
                    covered.insert(p);
                }
                used[b] = true;
                class.push(b);
            }
            if covered.count() != points {
                return None;
            }
            classes.push(class);
        }
        Some(classes)
    }
}

/// The `rho = 2` code of an `alpha`-regular graph: symbol `j` is the `j`-th
/// edge in lexicographic order and is stored on both of its endpoints.
pub fn from_graph(g: &Graph) -> Result<FrCode> {
    let alpha = g.regular_degree()?;
    if alpha == 0 || g.edge_count() == 0 {
        return Err(Error::params("graph has no edges"));
    }
    let mut node_sets = vec![Vec::with_capacity(alpha); g.vertex_count()];
    for (j, &(a, b)) in g.edges().iter().enumerate() {
        node_sets[a].push(j);
        node_sets[b].push(j);
    }
    FrCode::new(g.edge_count(), alpha, 2, node_sets)
}

/// The code of a transversal design: nodes are points, symbols are blocks
/// in construction order.
pub fn from_design(d: &TransversalDesign) -> Result<FrCode> {
    d.check()?;
    FrCode::from_incidence(d.ell * d.h, &d.blocks)
}
