//! Exhaustive k-subset search over node rows.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::bits::{popcount, words_for};
use crate::error::{Error, Result};

/// Cap on the number of subsets an exhaustive search may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const BUDGET_ENV: &str = "FREPKIT_BUDGET";

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// The default budget, overridden by `FREPKIT_BUDGET` when it parses.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget)
            .unwrap_or_default()
    }

    pub fn check(self, count: u128) -> Result<()> {
        if count > self.0 as u128 {
            Err(Error::BudgetExceeded { count, budget: self.0 })
        } else {
            Ok(())
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Rows packed into one contiguous word array.
pub(crate) struct PackedRows {
    words: Vec<u64>,
    width: usize,
    n: usize,
}

impl PackedRows {
    pub(crate) fn new<'a>(universe: usize, rows: impl IntoIterator<Item = &'a [u64]>) -> Self {
        let width = words_for(universe);
        let mut words = Vec::new();
        let mut n = 0;
        for r in rows {
            debug_assert_eq!(r.len(), width);
            words.extend_from_slice(r);
            n += 1;
        }
        PackedRows { words, width, n }
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.width..(i + 1) * self.width]
    }
}

struct MinUnion<'a> {
    rows: &'a PackedRows,
    k: usize,
    floor: usize,
    best: &'a AtomicUsize,
}

impl MinUnion<'_> {
    /// `stack` holds the running union at each depth.
    fn dfs(&self, stack: &mut [u64], depth: usize, next: usize) {
        let w = self.rows.width;
        let n = self.rows.n;
        if depth + 1 == self.k {
            self.best.fetch_min(popcount(&stack[depth * w..(depth + 1) * w]), Ordering::Relaxed);
            return;
        }
        for i in next..=n - (self.k - depth - 1) {
            let best = self.best.load(Ordering::Relaxed);
            if best <= self.floor {
                return;
            }
            let cnt = {
                let (lo, hi) = stack.split_at_mut((depth + 1) * w);
                let cur = &lo[depth * w..];
                let child = &mut hi[..w];
                let row = self.rows.row(i);
                let mut cnt = 0;
                for x in 0..w {
                    child[x] = cur[x] | row[x];
                    cnt += child[x].count_ones() as usize;
                }
                cnt
            };
            // unions only grow
            if cnt >= best {
                continue;
            }
            self.dfs(stack, depth + 1, i + 1);
        }
    }
}

/// Minimum union size over all k-subsets of rows, in parallel over the
/// smallest member. `floor` is a proven lower bound that allows an early
/// exit once reached.
pub(crate) fn min_union(rows: &PackedRows, k: usize, floor: usize) -> usize {
    assert!(k >= 1 && k <= rows.n);
    let best = AtomicUsize::new(usize::MAX);
    (0..=rows.n - k).into_par_iter().for_each(|first| {
        if best.load(Ordering::Relaxed) <= floor {
            return;
        }
        let search = MinUnion {
            rows,
            k,
            floor,
            best: &best,
        };
        let mut stack = vec![0u64; k * rows.width];
        stack[..rows.width].copy_from_slice(rows.row(first));
        if popcount(&stack[..rows.width]) < best.load(Ordering::Relaxed) {
            search.dfs(&mut stack, 0, first + 1);
        }
    });
    best.into_inner()
}

/// The lexicographically first k-subset whose union has exactly `target`
/// elements, if any.
pub(crate) fn first_with_union(rows: &PackedRows, k: usize, target: usize) -> Option<Vec<usize>> {
    fn go(rows: &PackedRows, k: usize, target: usize, acc: &[u64], chosen: &mut Vec<usize>, next: usize) -> bool {
        if chosen.len() == k {
            return popcount(acc) == target;
        }
        let need = k - chosen.len();
        for i in next..=rows.n - need {
            let u: Vec<u64> = acc.iter().zip(rows.row(i)).map(|(a, b)| a | b).collect();
            if popcount(&u) > target {
                continue;
            }
            chosen.push(i);
            if go(rows, k, target, &u, chosen, i + 1) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::with_capacity(k);
    let zero = vec![0u64; rows.width];
    go(rows, k, target, &zero, &mut chosen, 0).then_some(chosen)
}
