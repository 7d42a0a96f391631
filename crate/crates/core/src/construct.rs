//! Generators for the graph and design families behind FR codes.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::galois::{prime_power, Elem, Field};
use crate::incidence::{FrCode, Graph, TransversalDesign};

/// The complete `r`-partite graph on `n` vertices with parts of size `n/r`.
/// Vertex `v` lies in part `v / (n/r)`.
pub fn turan(n: usize, r: usize) -> Result<Graph> {
    if r < 2 || r > n {
        return Err(Error::params(format!("Turan graph needs 2 <= r <= n, got n = {n}, r = {r}")));
    }
    if n % r != 0 {
        return Err(Error::params(format!("r = {r} does not divide n = {n}")));
    }
    let part = n / r;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if u / part != v / part {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    turan(n, n)
}

pub fn complete_bipartite(alpha: usize) -> Result<Graph> {
    turan(2 * alpha, 2)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::params(format!("cycle needs at least 3 vertices, got {n}")));
    }
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CageId {
    Petersen,
    Heawood,
    McGee,
    TutteCoxeter,
}

impl CageId {
    pub const ALL: [CageId; 4] = [CageId::Petersen, CageId::Heawood, CageId::McGee, CageId::TutteCoxeter];

    pub fn degree(self) -> usize {
        3
    }

    pub fn girth(self) -> usize {
        match self {
            CageId::Petersen => 5,
            CageId::Heawood => 6,
            CageId::McGee => 7,
            CageId::TutteCoxeter => 8,
        }
    }

    /// `N(d, g)`, the cage's vertex count.
    pub fn vertices(self) -> usize {
        match self {
            CageId::Petersen => 10,
            CageId::Heawood => 14,
            CageId::McGee => 24,
            CageId::TutteCoxeter => 30,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CageId::Petersen => "petersen",
            CageId::Heawood => "heawood",
            CageId::McGee => "mcgee",
            CageId::TutteCoxeter => "tutte-coxeter",
        }
    }

    /// Exact cage size for `(d, g)` when it is one of the catalog entries.
    pub fn lookup(d: usize, g: usize) -> Option<CageId> {
        CageId::ALL.into_iter().find(|c| c.degree() == d && c.girth() == g)
    }
}

impl fmt::Display for CageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CageId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace(['_', ' '], "-");
        CageId::ALL
            .into_iter()
            .find(|c| c.name() == key || c.name().replace('-', "") == key)
            .ok_or_else(|| {
                Error::params(format!(
                    "unknown cage {s:?}; known: petersen, heawood, mcgee, tutte-coxeter"
                ))
            })
    }
}

/// Hamiltonian cycle `0..n` plus chords `i -> i + shift[i % len]`.
fn lcf(n: usize, shifts: &[i64]) -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect();
    for i in 0..n {
        let j = (i as i64 + shifts[i % shifts.len()]).rem_euclid(n as i64) as usize;
        if i < j {
            edges.push((i, j));
        }
    }
    Graph::new(n, edges).expect("LCF data describes a simple graph")
}

pub fn cage(id: CageId) -> Graph {
    match id {
        CageId::Petersen => {
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((5 + i, 5 + (i + 2) % 5));
            }
            Graph::new(10, edges).expect("Petersen adjacency is simple")
        }
        CageId::Heawood => lcf(14, &[5, -5]),
        CageId::McGee => lcf(24, &[12, 7, -7]),
        CageId::TutteCoxeter => lcf(30, &[-13, -9, 7, -7, 9, 13]),
    }
}

/// TD(ell, h) from the lines `y = a*c + b` over GF(h).
///
/// Point `(i, x)` of group `i` is numbered `i*h + x`. Block `(a, b)` is
/// numbered `b*h + a` and contains `(i, a*c_i + b)` where `c_i` is the field
/// element with integer encoding `i`; when `ell = h + 1` the last group holds
/// the slope `a` itself. For `ell <= h` the blocks with a fixed slope form a
/// parallel class.
pub fn transversal_design(ell: usize, h: usize) -> Result<TransversalDesign> {
    if prime_power(h as u64).is_none() {
        return Err(Error::params(format!("group size h = {h} is not a prime power")));
    }
    if ell < 2 || ell > h + 1 {
        return Err(Error::params(format!("TD needs 2 <= ell <= h + 1 = {}, got ell = {ell}", h + 1)));
    }
    let field = Field::with_order(h as u64)?;
    let groups = (0..ell).map(|i| (i * h..(i + 1) * h).collect()).collect();
    let mut blocks = Vec::with_capacity(h * h);
    for b in 0..h {
        for a in 0..h {
            let block = (0..ell)
                .map(|i| {
                    let x = if i == h {
                        a
                    } else {
                        field.add(field.mul(a as Elem, i as Elem), b as Elem) as usize
                    };
                    i * h + x
                })
                .collect();
            blocks.push(block);
        }
    }
    let d = TransversalDesign { ell, h, groups, blocks };
    debug_assert!(d.check().is_ok());
    Ok(d)
}

/// PG(2, q): points and lines are the 1-dimensional subspaces of GF(q)^3.
#[derive(Clone, Debug)]
pub struct ProjectivePlane {
    pub q: usize,
    /// Normalized homogeneous coordinates (first nonzero entry is 1).
    pub points: Vec<[Elem; 3]>,
    /// Each line as ascending point indices; line `l` has the coordinates
    /// of point `l` as its dual vector.
    pub lines: Vec<Vec<usize>>,
}

impl ProjectivePlane {
    /// Nodes are points, symbols are lines.
    pub fn to_code(&self) -> Result<FrCode> {
        FrCode::from_incidence(self.points.len(), &self.lines)
    }
}

pub fn projective_plane(q: usize) -> Result<ProjectivePlane> {
    if prime_power(q as u64).is_none() {
        return Err(Error::params(format!("plane order q = {q} is not a prime power")));
    }
    let f = Field::with_order(q as u64)?;
    let q32 = q as Elem;
    let mut points = Vec::with_capacity(q * q + q + 1);
    for y in 0..q32 {
        for z in 0..q32 {
            points.push([1, y, z]);
        }
    }
    for z in 0..q32 {
        points.push([0, 1, z]);
    }
    points.push([0, 0, 1]);
    let dot = |u: &[Elem; 3], v: &[Elem; 3]| {
        let s = f.add(f.mul(u[0], v[0]), f.mul(u[1], v[1]));
        f.add(s, f.mul(u[2], v[2]))
    };
    let lines = points
        .iter()
        .map(|l| (0..points.len()).filter(|&p| dot(l, &points[p]) == 0).collect())
        .collect();
    Ok(ProjectivePlane { q, points, lines })
}
