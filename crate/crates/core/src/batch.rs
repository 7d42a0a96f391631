//! Parallel retrieval planning and FRB certification.
//!
//! A batch is a set of distinct symbols; it is retrievable when each symbol
//! can be read from a different node, i.e. when the symbol/node incidence
//! has a matching saturating the batch.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analyze::{binomial, file_size_with, Budget};
use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::galois::prime_power;
use crate::incidence::FrCode;

/// Symbol -> node assignment, injective on nodes. All indices 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatchPlan {
    pub assignment: Vec<(usize, usize)>,
}

impl BatchPlan {
    /// One `"j -> node i"` line per symbol, 1-based.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for &(j, i) in &self.assignment {
            let _ = writeln!(s, "{} -> node {}", j + 1, i + 1);
        }
        s
    }

    pub fn is_valid_for(&self, code: &FrCode) -> bool {
        let mut used = BitRow::new(code.n());
        self.assignment.iter().all(|&(j, i)| {
            let fresh = !used.contains(i);
            used.insert(i);
            fresh && code.rows()[i].contains(j)
        })
    }
}

/// A symbol set whose holders number fewer than its size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HallWitness {
    pub symbols: Vec<usize>,
    pub nodes: Vec<usize>,
}

impl HallWitness {
    pub fn holds_for(&self, code: &FrCode) -> bool {
        let mut nb = BitRow::new(code.n());
        for &j in &self.symbols {
            for i in code.holders(j) {
                nb.insert(i);
            }
        }
        nb.iter().eq(self.nodes.iter().copied()) && self.nodes.len() < self.symbols.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Retrieval {
    Plan(BatchPlan),
    NoPlan(HallWitness),
}

/// Maximum bipartite matching by augmenting paths, symbols scanned in the
/// order given and nodes in ascending order.
pub(crate) struct Matcher<'a> {
    holders: &'a [Vec<usize>],
    pub(crate) node_match: Vec<Option<usize>>,
    seen: Vec<bool>,
}

impl<'a> Matcher<'a> {
    pub(crate) fn new(n: usize, holders: &'a [Vec<usize>]) -> Self {
        Matcher {
            holders,
            node_match: vec![None; n],
            seen: vec![false; n],
        }
    }

    fn augment(&mut self, sym: usize) -> bool {
        for &i in &self.holders[sym] {
            if self.seen[i] {
                continue;
            }
            self.seen[i] = true;
            if self.node_match[i].is_none_or(|other| self.augment(other)) {
                self.node_match[i] = Some(sym);
                return true;
            }
        }
        false
    }

    pub(crate) fn try_add(&mut self, sym: usize) -> bool {
        self.seen.fill(false);
        self.augment(sym)
    }

    /// Symbols and nodes reachable from `root` along alternating paths.
    fn alternating_closure(&self, root: usize) -> HallWitness {
        let n = self.node_match.len();
        let mut sym_seen = vec![root];
        let mut node_seen = BitRow::new(n);
        let mut stack = vec![root];
        while let Some(s) = stack.pop() {
            for &i in &self.holders[s] {
                if node_seen.contains(i) {
                    continue;
                }
                node_seen.insert(i);
                let m = self.node_match[i].expect("no augmenting path from root");
                if !sym_seen.contains(&m) {
                    sym_seen.push(m);
                    stack.push(m);
                }
            }
        }
        sym_seen.sort_unstable();
        HallWitness {
            symbols: sym_seen,
            nodes: node_seen.iter().collect(),
        }
    }
}

fn check_request(code: &FrCode, symbols: &[usize]) -> Result<()> {
    let mut seen = BitRow::new(code.theta());
    for &j in symbols {
        if j >= code.theta() {
            return Err(Error::params(format!("symbol {} outside 1..={}", j + 1, code.theta())));
        }
        if seen.contains(j) {
            return Err(Error::params(format!("symbol {} requested twice", j + 1)));
        }
        seen.insert(j);
    }
    Ok(())
}

/// Plans a one-symbol-per-node read of `symbols`, or returns a Hall
/// violation `S` with `|Γ(S)| = |S| - 1` proving no plan exists.
pub fn retrieval_plan(code: &FrCode, symbols: &[usize]) -> Result<Retrieval> {
    check_request(code, symbols)?;
    let holders = code.symbol_holders();
    Ok(plan_with(code.n(), &holders, symbols))
}

fn plan_with(n: usize, holders: &[Vec<usize>], symbols: &[usize]) -> Retrieval {
    let mut sorted = symbols.to_vec();
    sorted.sort_unstable();
    let mut m = Matcher::new(n, holders);
    for &j in &sorted {
        if !m.try_add(j) {
            return Retrieval::NoPlan(m.alternating_closure(j));
        }
    }
    let mut assignment: Vec<(usize, usize)> = m
        .node_match
        .iter()
        .enumerate()
        .filter_map(|(i, s)| s.map(|j| (j, i)))
        .collect();
    assignment.sort_unstable();
    Retrieval::Plan(BatchPlan { assignment })
}

/// Exact batch size with both certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatchT {
    pub t: usize,
    /// A `(t + 1)`-symbol set with no plan; `None` when `t = theta`.
    pub violation: Option<HallWitness>,
    /// Node sets checked to have no more enclosed symbols than members.
    /// Every node set smaller than the violation's was checked, which by
    /// Hall's theorem makes every `t`-subset retrievable.
    pub node_sets_checked: u128,
}

/// The largest `t` such that every `t`-subset of symbols is retrievable.
///
/// A minimal Hall violation `S` has `|Γ(S)| = |S| - 1`, so the smallest
/// violation size is `min |T| + 1` over node sets `T` enclosing more than
/// `|T|` symbols (a symbol is enclosed when all its holders are in `T`).
/// Node sets are searched by increasing size.
pub fn batch_t(code: &FrCode, budget: Budget) -> Result<BatchT> {
    code.ensure_valid()?;
    let n = code.n();
    let holders = code.symbol_holders();
    let masks: Vec<BitRow> = holders
        .iter()
        .map(|h| BitRow::from_indices(n, h.iter().copied()))
        .collect();
    let mut checked: u128 = 0;
    for size in 1..=n {
        checked += binomial(n, size);
        budget.check(checked)?;
        if let Some((_, enclosed)) = find_dense(&masks, n, size) {
            let symbols: Vec<usize> = enclosed.into_iter().take(size + 1).collect();
            return Ok(BatchT {
                t: size,
                violation: Some(HallWitness {
                    nodes: nodes_of(&holders, &symbols, n),
                    symbols,
                }),
                node_sets_checked: checked,
            });
        }
    }
    Ok(BatchT {
        t: code.theta(),
        violation: None,
        node_sets_checked: checked,
    })
}

fn nodes_of(holders: &[Vec<usize>], symbols: &[usize], n: usize) -> Vec<usize> {
    let mut nb = BitRow::new(n);
    for &j in symbols {
        for &i in &holders[j] {
            nb.insert(i);
        }
    }
    nb.iter().collect()
}

/// First `size`-set of nodes (lexicographic) enclosing more than `size`
/// symbols, with the enclosed symbols.
fn find_dense(masks: &[BitRow], n: usize, size: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    fn go(masks: &[BitRow], n: usize, size: usize, set: &mut BitRow, chosen: &mut Vec<usize>, next: usize) -> bool {
        if chosen.len() == size {
            let enclosed = masks.iter().filter(|m| m.is_subset(set)).count();
            return enclosed > size;
        }
        for v in next..=n - (size - chosen.len()) {
            set.insert(v);
            chosen.push(v);
            if go(masks, n, size, set, chosen, v + 1) {
                return true;
            }
            chosen.pop();
            set.remove(v);
        }
        false
    }
    let mut set = BitRow::new(n);
    let mut chosen = Vec::with_capacity(size);
    if go(masks, n, size, &mut set, &mut chosen, 0) {
        let enclosed = masks
            .iter()
            .enumerate()
            .filter(|(_, m)| m.is_subset(&set))
            .map(|(j, _)| j)
            .collect();
        Some((chosen, enclosed))
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetCertificate {
    pub t: usize,
    pub checked: u128,
    /// First `t`-subset (lexicographic) without a plan, with its witness.
    pub counterexample: Option<(Vec<usize>, HallWitness)>,
}

impl SubsetCertificate {
    pub fn certified(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Runs the matcher on every `t`-subset of symbols.
pub fn certify_all_subsets(code: &FrCode, t: usize, budget: Budget) -> Result<SubsetCertificate> {
    let theta = code.theta();
    if t == 0 || t > theta {
        return Err(Error::params(format!("batch size {t} outside 1..={theta}")));
    }
    budget.check(binomial(theta, t))?;
    let holders = code.symbol_holders();
    let mut subset: Vec<usize> = (0..t).collect();
    let mut checked = 0u128;
    loop {
        checked += 1;
        if let Retrieval::NoPlan(w) = plan_with(code.n(), &holders, &subset) {
            return Ok(SubsetCertificate {
                t,
                checked,
                counterexample: Some((subset, w)),
            });
        }
        // next combination in lexicographic order
        let mut i = t;
        loop {
            if i == 0 {
                return Ok(SubsetCertificate {
                    t,
                    checked,
                    counterexample: None,
                });
            }
            i -= 1;
            if subset[i] < theta - t + i {
                break;
            }
        }
        subset[i] += 1;
        for x in i + 1..t {
            subset[x] = subset[x - 1] + 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrbProperties {
    pub node_storage: bool,
    pub symbol_replication: bool,
    pub reconstruction: bool,
    pub batch_retrieval: bool,
    pub t_at_most_m: bool,
}

/// A certified `rho-(n, M, k, alpha, t)` FRB code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrbCertificate {
    pub rho: usize,
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub k: usize,
    pub alpha: usize,
    pub t: usize,
    pub tuple: String,
    pub properties: FrbProperties,
    pub batch: BatchT,
}

impl FrbCertificate {
    pub fn to_text(&self) -> String {
        let mut s = format!("FRB code: {}\n", self.tuple);
        let p = &self.properties;
        for (name, ok) in [
            ("1 node storage", p.node_storage),
            ("2 symbol replication", p.symbol_replication),
            ("3 reconstruction from any k nodes", p.reconstruction),
            ("4 batch retrieval", p.batch_retrieval),
            ("t <= M", p.t_at_most_m),
        ] {
            let _ = writeln!(s, "  property {name}: {}", if ok { "pass" } else { "FAIL" });
        }
        if let Some(w) = &self.batch.violation {
            let _ = writeln!(
                s,
                "  maximality witness: symbols {} held by only {} nodes {}",
                one_based_text(&w.symbols),
                w.nodes.len(),
                one_based_text(&w.nodes)
            );
        }
        s
    }
}

/// `{1, 2, 3}` from 0-based indices.
pub fn one_based_text(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|x| (x + 1).to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

pub fn frb_tuple(rho: usize, n: usize, m: usize, k: usize, alpha: usize, t: usize) -> String {
    format!("{rho}-({n},{m},{k},{alpha},{t})")
}

/// Assembles `M = M(k)` and the exact `t`, checking the four FRB properties.
/// `t > M` violates the definition and is an error.
pub fn frb_certify(code: &FrCode, k: usize, budget: Budget) -> Result<FrbCertificate> {
    let report = code.validate();
    if k == 0 || k > code.alpha() {
        return Err(Error::params(format!("FRB codes need 1 <= k <= alpha = {}, got {k}", code.alpha())));
    }
    let m = file_size_with(code, k, budget, 0)?;
    let batch = batch_t(code, budget)?;
    let t = batch.t;
    if t > m {
        return Err(Error::Definition(format!(
            "batch size t = {t} exceeds file size M = {m}; the FRB definition needs t <= M"
        )));
    }
    Ok(FrbCertificate {
        rho: code.rho(),
        n: code.n(),
        m,
        k,
        alpha: code.alpha(),
        t,
        tuple: frb_tuple(code.rho(), code.n(), m, k, code.alpha(), t),
        properties: FrbProperties {
            node_storage: report.row_weights && report.elements_distinct_in_range,
            symbol_replication: report.column_weights,
            reconstruction: true,
            batch_retrieval: t >= 1,
            t_at_most_m: true,
        },
        batch,
    })
}

/// Code families with a guaranteed batch size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    CompleteBipartite { alpha: usize },
    Girth { g: usize },
    ResolvableTd { alpha: usize },
}

pub fn predicted_batch_t(family: Family) -> Result<usize> {
    match family {
        Family::CompleteBipartite { alpha } if alpha > 2 => Ok(5),
        Family::CompleteBipartite { alpha } => Err(Error::params(format!("complete bipartite family needs alpha > 2, got {alpha}"))),
        Family::Girth { g } if g >= 3 => Ok(2 * g - g / 2 - 1),
        Family::Girth { g } => Err(Error::params(format!("girth must be at least 3, got {g}"))),
        Family::ResolvableTd { alpha } if alpha >= 3 && prime_power(alpha as u64).is_some() => Ok(alpha * alpha - alpha - 1),
        Family::ResolvableTd { alpha } => Err(Error::params(format!("resolvable TD family needs a prime power alpha >= 3, got {alpha}"))),
    }
}
