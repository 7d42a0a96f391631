//! Table-based repair by transfer.
//!
//! Every donor sends one stored value and the newcomer writes it unchanged.
//! Values are moved as the decimal strings found in donor files; nothing in
//! this module does field arithmetic.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use super::{node_file_name, sha256_hex, StoredSystem};
use crate::batch::Matcher;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepairPolicy {
    /// Prefer the lowest-numbered surviving replica.
    #[default]
    LowestId,
    /// Rotate the preference per symbol so load spreads across donors.
    Spread,
}

impl FromStr for RepairPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lowest-id" | "lowest" => Ok(RepairPolicy::LowestId),
            "spread" => Ok(RepairPolicy::Spread),
            _ => Err(Error::params(format!("unknown repair policy {s:?} (lowest-id, spread)"))),
        }
    }
}

/// Donor table for one failed node. Indices 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairPlan {
    pub failed: usize,
    /// `(symbol, donor)` in the failed node's symbol order.
    pub transfers: Vec<(usize, usize)>,
    /// Distinct donors contacted.
    pub d: usize,
    /// Symbols downloaded from each donor per transfer.
    pub beta: usize,
    /// Transfers served by a donor already used for another symbol.
    pub reused: usize,
    /// Total symbols downloaded.
    pub bandwidth: usize,
}

impl RepairPlan {
    /// `"j -> node i"` per transfer, then the totals; 1-based.
    pub fn to_text(&self) -> String {
        let mut s = format!("repair node {}\n", self.failed + 1);
        for &(j, i) in &self.transfers {
            let _ = writeln!(s, "{} -> node {}", j + 1, i + 1);
        }
        let _ = writeln!(
            s,
            "donors d = {}, beta = {}, bandwidth = {} symbols, reused donors = {}",
            self.d, self.beta, self.bandwidth, self.reused
        );
        s
    }
}

/// Chooses one surviving replica per symbol of `failed`, using distinct
/// donors whenever a system of distinct donors exists.
pub fn plan_repair(sys: &StoredSystem, failed: usize, policy: RepairPolicy) -> Result<RepairPlan> {
    let code = sys.code();
    if failed >= code.n() {
        return Err(Error::params(format!("node {} outside 1..={}", failed + 1, code.n())));
    }
    let alive = sys.alive();
    let symbols = code.node_set(failed);
    let mut cands = Vec::with_capacity(symbols.len());
    for &j in symbols {
        let mut c: Vec<usize> = code.holders(j).into_iter().filter(|&i| i != failed && alive.contains(i)).collect();
        if c.is_empty() {
            return Err(Error::Irreparable {
                node: failed + 1,
                symbol: j + 1,
            });
        }
        if policy == RepairPolicy::Spread {
            let len = c.len();
            c.rotate_left(j % len);
        }
        cands.push(c);
    }

    let mut matcher = Matcher::new(code.n(), &cands);
    for pos in 0..cands.len() {
        matcher.try_add(pos);
    }
    let mut donor: Vec<Option<usize>> = vec![None; cands.len()];
    for (i, m) in matcher.node_match.iter().enumerate() {
        if let Some(pos) = *m {
            donor[pos] = Some(i);
        }
    }
    let mut reused = 0;
    let transfers: Vec<(usize, usize)> = symbols
        .iter()
        .zip(&donor)
        .zip(&cands)
        .map(|((&j, d), c)| {
            let i = d.unwrap_or_else(|| {
                reused += 1;
                c.iter().copied().min().expect("non-empty")
            });
            (j, i)
        })
        .collect();
    let mut donors: Vec<usize> = transfers.iter().map(|t| t.1).collect();
    donors.sort_unstable();
    donors.dedup();
    Ok(RepairPlan {
        failed,
        d: donors.len(),
        beta: 1,
        reused,
        bandwidth: transfers.len(),
        transfers,
    })
}

/// Finds the value string stored for symbol `j` (0-based) in a node file.
fn copy_value<'a>(text: &'a str, j: usize) -> Option<&'a str> {
    let key = (j + 1).to_string();
    text.lines().skip(1).find_map(|line| {
        let mut it = line.split_ascii_whitespace();
        (it.next() == Some(key.as_str())).then(|| it.next()).flatten()
    })
}

/// Rebuilds the failed node's file from its donors and checks it against
/// the manifest before putting it in place. Returns the restored path.
pub fn execute_repair(sys: &StoredSystem, plan: &RepairPlan) -> Result<PathBuf> {
    let code = sys.code();
    let failed = plan.failed;
    if failed >= code.n() {
        return Err(Error::params(format!("node {} outside 1..={}", failed + 1, code.n())));
    }
    let symbols = code.node_set(failed);
    if plan.transfers.len() != symbols.len() || !plan.transfers.iter().map(|t| t.0).eq(symbols.iter().copied()) {
        return Err(Error::params("plan does not list the failed node's symbols in order"));
    }

    let mut out = format!("{} {}\n", failed + 1, symbols.len());
    for &(j, donor) in &plan.transfers {
        if donor == failed || donor >= code.n() || !code.rows()[donor].contains(j) {
            return Err(Error::params(format!("node {} does not hold symbol {}", donor + 1, j + 1)));
        }
        let bytes = sys.read_node_bytes(donor)?;
        let text = std::str::from_utf8(&bytes).map_err(|_| Error::Integrity("node file is not UTF-8".into()))?;
        let value = copy_value(text, j)
            .ok_or_else(|| Error::Integrity(format!("node {} file lacks symbol {}", donor + 1, j + 1)))?;
        let _ = writeln!(out, "{} {value}", j + 1);
    }
    if sha256_hex(out.as_bytes()) != sys.manifest().nodes[failed].sha256 {
        return Err(Error::Integrity(format!("repaired node {} does not match its checksum", failed + 1)));
    }
    let path = sys.root().join(node_file_name(failed));
    let tmp = path.with_extension("dat.tmp");
    fs::write(&tmp, &out).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}
