//! Closed forms and recursions bounding the file size `M(k)`.
//!
//! All values are `i64`: the MBR expression goes negative for large `k`.

use serde::Serialize;

use crate::construct::CageId;
use crate::error::{Error, Result};

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}

/// One step of the FR-capacity recursion: the bound at `k + 1` given a
/// value `prev` at `k`.
fn step(n: usize, k: usize, alpha: usize, rho: usize, prev: i64) -> i64 {
    let (n, k, alpha, rho) = (n as i64, k as i64, alpha as i64, rho as i64);
    prev + alpha - ceil_div(rho * prev - k * alpha, n - k)
}

/// The FR-capacity bound `phi(1..=k_max)`.
pub fn fr_capacity_profile(n: usize, k_max: usize, alpha: usize, rho: usize) -> Result<Vec<i64>> {
    if k_max == 0 || k_max > n {
        return Err(Error::KOutOfRange { k: k_max, max: n });
    }
    let mut out = Vec::with_capacity(k_max);
    out.push(alpha as i64);
    for k in 1..k_max {
        let prev = out[k - 1];
        out.push(step(n, k, alpha, rho, prev));
    }
    Ok(out)
}

/// `phi(k)` with `phi(1) = alpha`. Defined for `1 <= k <= n`.
pub fn fr_capacity_bound(n: usize, k: usize, alpha: usize, rho: usize) -> Result<i64> {
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, max: n });
    }
    Ok(fr_capacity_profile(n, k, alpha, rho)?[k - 1])
}

/// The recursion re-seeded at every step from caller-supplied caps:
/// `out[k] = min(caps[k], step(caps[k-1]))`, `out[0] = min(alpha, caps[0])`.
/// Index `i` holds the value for `k = i + 1`.
pub fn improved_bound_profile(known_caps: &[i64], n: usize, alpha: usize, rho: usize) -> Result<Vec<i64>> {
    if known_caps.is_empty() || known_caps.len() > n {
        return Err(Error::KOutOfRange {
            k: known_caps.len(),
            max: n,
        });
    }
    let mut out = Vec::with_capacity(known_caps.len());
    out.push((alpha as i64).min(known_caps[0]));
    for k in 1..known_caps.len() {
        out.push(step(n, k, alpha, rho, known_caps[k - 1]).min(known_caps[k]));
    }
    Ok(out)
}

/// MBR capacity `k*alpha - C(k, 2)`.
pub fn mbr_capacity(k: usize, alpha: usize) -> i64 {
    let (k, alpha) = (k as i64, alpha as i64);
    k * alpha - k * (k - 1) / 2
}

/// Upper bound `k*alpha - k + 1` on any `rho = 2` code, for `k <= alpha`.
pub fn rho2_upper_bound(k: usize, alpha: usize) -> i64 {
    (k * alpha) as i64 - k as i64 + 1
}

/// File size of the `(n, r)`-Turan code: `k*alpha - floor((r-1)/r * k^2/2)`.
pub fn turan_file_size(n: usize, r: usize, k: usize) -> Result<i64> {
    if r == 0 || n % r != 0 {
        return Err(Error::params(format!("r = {r} does not divide n = {n}")));
    }
    if k == 0 {
        return Err(Error::KOutOfRange { k, max: n });
    }
    let alpha = ((r - 1) * n / r) as i64;
    let (k, r) = (k as i64, r as i64);
    Ok(k * alpha - ((r - 1) * k * k).div_euclid(2 * r))
}

/// Moore lower bound `n0(d, g)` on the order of a `d`-regular graph of girth `g`.
pub fn moore_bound(d: usize, g: usize) -> Result<u64> {
    if d < 2 || g < 3 {
        return Err(Error::params(format!("Moore bound needs d >= 2 and g >= 3, got d = {d}, g = {g}")));
    }
    let d = d as u64;
    let geometric = |terms: u64| (0..terms).map(|i| (d - 1).pow(i as u32)).sum::<u64>();
    Ok(if g % 2 == 1 {
        1 + d * geometric((g as u64 - 3) / 2 + 1)
    } else {
        2 * geometric((g as u64 - 2) / 2 + 1)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CageSizeBasis {
    /// Exact `N(d, g)` from the cage catalog.
    Exact,
    /// The Moore bound, a lower bound on `N(d, g)`.
    MooreLowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CageSize {
    pub value: u64,
    pub basis: CageSizeBasis,
}

pub fn cage_size(d: usize, g: usize) -> Result<CageSize> {
    if let Some(id) = CageId::lookup(d, g) {
        return Ok(CageSize {
            value: id.vertices() as u64,
            basis: CageSizeBasis::Exact,
        });
    }
    Ok(CageSize {
        value: moore_bound(d, g)?,
        basis: CageSizeBasis::MooreLowerBound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TightnessFlag {
    /// `alpha*k - alpha - k + 3 <= n < N(alpha, k + 1)`.
    pub not_tight: bool,
    pub lower: i64,
    pub cage_size: CageSize,
}

/// Whether the FR-capacity bound is provably not attained by any `rho = 2`
/// code at `k`. With a Moore-bound cage size a `true` is still sound
/// (`n < n0 <= N`) but a `false` may be a miss.
pub fn not_tight_flag(n: usize, alpha: usize, k: usize) -> TightnessFlag {
    let lower = (alpha * k) as i64 - alpha as i64 - k as i64 + 3;
    let cage_size = cage_size(alpha, k + 1).unwrap_or(CageSize {
        value: 0,
        basis: CageSizeBasis::MooreLowerBound,
    });
    TightnessFlag {
        not_tight: lower <= n as i64 && (n as u64) < cage_size.value,
        lower,
        cage_size,
    }
}

/// Lower bound for TD(rho, alpha) codes:
/// `k*alpha - C(k,2) + rho*C(b,2) + b*t` with `k = b*rho + t`, `t < rho`.
pub fn td_file_size_lower_bound(alpha: usize, rho: usize, k: usize) -> i64 {
    let (b, t) = ((k / rho) as i64, (k % rho) as i64);
    mbr_capacity(k, alpha) + rho as i64 * (b * (b - 1) / 2) + b * t
}

/// Last `k` covered by the girth closed form: `g + ceil(g/2) - 2`.
pub fn girth_formula_range(g: usize) -> usize {
    g + g.div_ceil(2) - 2
}

/// File size of a girth-`g` graph code: `k*alpha - k + 1` for `k <= g - 1`,
/// `k*alpha - k` for `g <= k <= g + ceil(g/2) - 2`.
pub fn girth_file_size(alpha: usize, g: usize, k: usize) -> Result<i64> {
    if k == 0 {
        return Err(Error::KOutOfRange { k, max: girth_formula_range(g) });
    }
    let base = (k * alpha) as i64 - k as i64;
    if k < g {
        Ok(base + 1)
    } else if k <= girth_formula_range(g) {
        Ok(base)
    } else {
        Err(Error::NotApplicable(format!(
            "girth formula covers k <= {} for g = {g}, got k = {k}",
            girth_formula_range(g)
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_recursion_by_hand() {
        assert_eq!(fr_capacity_profile(6, 3, 3, 2).unwrap(), vec![3, 5, 7]);
        assert_eq!(fr_capacity_profile(12, 4, 4, 3).unwrap(), vec![4, 7, 9, 11]);
        assert_eq!(fr_capacity_bound(6, 3, 3, 2).unwrap(), 7);
        assert_eq!(fr_capacity_bound(9, 1, 5, 3).unwrap(), 5);
        assert!(fr_capacity_bound(6, 7, 3, 2).is_err());
        assert!(fr_capacity_bound(6, 0, 3, 2).is_err());
    }

    #[test]
    fn improved_profile_fixed_point_and_clip() {
        let phi = fr_capacity_profile(8, 5, 3, 2).unwrap();
        assert_eq!(improved_bound_profile(&phi, 8, 3, 2).unwrap(), phi);
        let theta = 12;
        let out = improved_bound_profile(&[theta; 8], 8, 3, 2).unwrap();
        assert!(out.iter().all(|&v| v <= theta));
        assert_eq!(out[0], 3);
    }

    #[test]
    fn improved_profile_with_injected_cap() {
        // n = 8, alpha = 3: phi = 3, 5, 7, 9, ...; cap M(4) <= 8
        let mut caps = fr_capacity_profile(8, 5, 3, 2).unwrap();
        caps[3] = 8;
        let out = improved_bound_profile(&caps, 8, 3, 2).unwrap();
        assert_eq!(out[3], 8);
        assert_eq!(out[4], 8 + 3 - 1);
    }

    #[test]
    fn mbr_values() {
        assert_eq!(mbr_capacity(3, 3), 6);
        assert_eq!(mbr_capacity(1, 7), 7);
        assert_eq!(mbr_capacity(4, 4), 10);
    }

    #[test]
    fn turan_closed_form() {
        assert_eq!(turan_file_size(6, 2, 3).unwrap(), 7);
        assert_eq!(turan_file_size(6, 2, 2).unwrap(), 5);
        assert!(turan_file_size(7, 2, 2).is_err());
    }

    #[test]
    fn complete_graph_turan_value_vs_mbr() {
        // With r = n the floor term can exceed C(k, 2): at n = 8, k = 4 it
        // is floor(7 * 16 / 16) = 7 > 6. K_8 itself sits at the MBR value 22.
        for n in 2..=8 {
            for k in 1..=n.min(6) {
                let f = turan_file_size(n, n, k).unwrap();
                if (n, k) == (8, 4) {
                    assert_eq!((f, mbr_capacity(k, n - 1)), (21, 22));
                } else {
                    assert_eq!(f, mbr_capacity(k, n - 1), "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn moore_values() {
        assert_eq!(moore_bound(3, 5).unwrap(), 10);
        assert_eq!(moore_bound(3, 6).unwrap(), 14);
        assert_eq!(moore_bound(3, 7).unwrap(), 22);
        assert_eq!(moore_bound(3, 8).unwrap(), 30);
        for g in 3..12 {
            assert_eq!(moore_bound(2, g).unwrap(), g as u64);
        }
        for d in 2..6 {
            for g in 3..9 {
                assert!(moore_bound(d, g).unwrap() >= d as u64 + 1);
            }
        }
        assert!(moore_bound(1, 5).is_err());
    }

    #[test]
    fn cage_size_prefers_catalog() {
        assert_eq!(cage_size(3, 7).unwrap().value, 24);
        assert_eq!(cage_size(3, 7).unwrap().basis, CageSizeBasis::Exact);
        let proxy = cage_size(4, 5).unwrap();
        assert_eq!(proxy.basis, CageSizeBasis::MooreLowerBound);
        assert_eq!(proxy.value, 17);
    }

    #[test]
    fn small_moore_gap_cases() {
        assert!(not_tight_flag(8, 3, 4).not_tight);
        assert!(!not_tight_flag(10, 3, 4).not_tight);
        assert!(!not_tight_flag(100, 3, 4).not_tight);
        assert_eq!(not_tight_flag(8, 3, 4).lower, 8);
    }

    #[test]
    fn td_lower_bound() {
        assert_eq!(td_file_size_lower_bound(4, 3, 4), 11);
        assert_eq!(td_file_size_lower_bound(4, 3, 3), 9);
        for a in 2..8 {
            for r in 2..=a {
                assert_eq!(td_file_size_lower_bound(a, r, 1), a as i64);
            }
        }
    }

    #[test]
    fn girth_formula() {
        assert_eq!(girth_file_size(3, 5, 4).unwrap(), 9);
        assert_eq!(girth_file_size(3, 5, 6).unwrap(), 12);
        assert_eq!(girth_file_size(7, 5, 1).unwrap(), 7);
        assert!(matches!(girth_file_size(3, 5, 7), Err(Error::NotApplicable(_))));
    }
}
