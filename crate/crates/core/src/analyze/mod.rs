//! Exact file sizes by enumeration, the published bounds, and verdicts.
//!
//! Enumeration is the only source of `M(k)`; every closed form here is a
//! cross-check against it.

mod bounds;
mod enumerate;
mod graph;
mod report;

pub use bounds::{
    cage_size, fr_capacity_bound, fr_capacity_profile, girth_file_size, girth_formula_range, improved_bound_profile,
    not_tight_flag, mbr_capacity, moore_bound, rho2_upper_bound, td_file_size_lower_bound, turan_file_size, CageSize,
    CageSizeBasis, TightnessFlag,
};
pub use enumerate::{binomial, Budget, BUDGET_ENV, DEFAULT_BUDGET};
pub use graph::{girth, has_k_clique, max_induced_edges, max_induced_edges_with_witness};
pub use report::{cross_checks, CrossCheck, Report, REPORT_SCHEMA};

use serde::Serialize;

use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::incidence::FrCode;
use enumerate::PackedRows;

fn packed(code: &FrCode) -> PackedRows {
    PackedRows::new(code.theta(), code.rows().iter().map(BitRow::words))
}

fn check_k(code: &FrCode, k: usize) -> Result<()> {
    if k == 0 || k > code.n() {
        Err(Error::KOutOfRange { k, max: code.n() })
    } else {
        Ok(())
    }
}

/// `M(k) = min over k-sets of nodes of the size of their symbol union`.
pub fn file_size(code: &FrCode, k: usize) -> Result<usize> {
    file_size_with(code, k, Budget::default(), 0)
}

/// [`file_size`] with an explicit budget and a proven lower bound on the
/// answer (0 if none), used only to stop early.
pub fn file_size_with(code: &FrCode, k: usize, budget: Budget, lower: usize) -> Result<usize> {
    check_k(code, k)?;
    budget.check(binomial(code.n(), k))?;
    // any union contains a whole row
    let narrowest = code.rows().iter().map(BitRow::count).min().unwrap_or(0);
    Ok(enumerate::min_union(&packed(code), k, lower.max(narrowest)))
}

/// A lexicographically first set of `k` nodes (0-based) whose union has
/// exactly `M(k)` symbols.
pub fn file_size_witness(code: &FrCode, k: usize, budget: Budget) -> Result<(usize, Vec<usize>)> {
    let m = file_size_with(code, k, budget, 0)?;
    let set = enumerate::first_with_union(&packed(code), k, m).expect("minimum is attained");
    Ok((m, set))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub k: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub phi: i64,
    pub mbr: i64,
    pub caps: Caps,
    pub verdicts: RowVerdicts,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// `k*alpha - k + 1`, for `rho = 2` and `k <= alpha`.
    pub rho2_upper: Option<i64>,
    /// `k*alpha - k` when the degree-gap condition holds (`rho = 2`, `k <= alpha`).
    pub not_tight_cap: Option<i64>,
    /// Recursion re-seeded with the tightest caps known at each `k`.
    pub phi_improved: i64,
    pub theta: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowVerdicts {
    /// `M(k) >= mbr`.
    pub at_least_mbr: bool,
    /// `M(k)` equals `min(phi, rho2_upper)`.
    pub k_optimal: bool,
    pub bound_not_tight: Option<TightnessFlag>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CapacityProfile {
    pub n: usize,
    pub theta: usize,
    pub alpha: usize,
    pub rho: usize,
    pub rows: Vec<ProfileRow>,
    /// `None` when the profile stops before `k = alpha`.
    pub universally_good: Option<bool>,
    pub optimal: Option<bool>,
}

impl CapacityProfile {
    pub fn m(&self, k: usize) -> Option<usize> {
        self.rows.get(k.checked_sub(1)?).map(|r| r.m)
    }

    pub fn ms(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.m).collect()
    }
}

/// Exact `M(k)` for `k = 1..=k_max` (default `alpha`) with all bounds.
pub fn capacity_profile(code: &FrCode, k_max: Option<usize>, budget: Budget) -> Result<CapacityProfile> {
    code.ensure_valid()?;
    let (n, alpha, rho, theta) = (code.n(), code.alpha(), code.rho(), code.theta());
    let k_max = k_max.unwrap_or(alpha).min(n);
    check_k(code, k_max)?;
    let phi = fr_capacity_profile(n, k_max, alpha, rho)?;

    let mut ms = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let prev = ms.last().copied().unwrap_or(0);
        ms.push(file_size_with(code, k, budget, prev)?);
    }

    let rho2 = rho == 2;
    let mut tight_caps = Vec::with_capacity(k_max);
    let mut rows = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let i = k - 1;
        let in_range = rho2 && k <= alpha;
        let rho2_upper = in_range.then(|| rho2_upper_bound(k, alpha));
        let flag = in_range.then(|| not_tight_flag(n, alpha, k));
        let not_tight_cap = flag.filter(|f| f.not_tight).map(|_| (k * alpha) as i64 - k as i64);
        let composite = [Some(phi[i]), rho2_upper].into_iter().flatten().min().unwrap();
        tight_caps.push(
            [Some(phi[i]), rho2_upper, not_tight_cap, Some(theta as i64)]
                .into_iter()
                .flatten()
                .min()
                .unwrap(),
        );
        let mbr = mbr_capacity(k, alpha);
        rows.push(ProfileRow {
            k,
            m: ms[i],
            phi: phi[i],
            mbr,
            caps: Caps {
                rho2_upper,
                not_tight_cap,
                phi_improved: 0,
                theta: theta as i64,
            },
            verdicts: RowVerdicts {
                at_least_mbr: ms[i] as i64 >= mbr,
                k_optimal: ms[i] as i64 == composite,
                bound_not_tight: flag,
            },
        });
    }
    let improved = improved_bound_profile(&tight_caps, n, alpha, rho)?;
    for (row, v) in rows.iter_mut().zip(improved) {
        row.caps.phi_improved = v;
    }

    let complete = k_max >= alpha;
    let upto_alpha = || rows.iter().filter(|r| r.k <= alpha);
    Ok(CapacityProfile {
        n,
        theta,
        alpha,
        rho,
        universally_good: complete.then(|| upto_alpha().all(|r| r.verdicts.at_least_mbr)),
        optimal: complete.then(|| upto_alpha().all(|r| r.verdicts.k_optimal)),
        rows,
    })
}
