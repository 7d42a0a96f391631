use std::fmt::Write as _;

use serde::Serialize;

use super::{
    girth, girth_file_size, girth_formula_range, has_k_clique, max_induced_edges, rho2_upper_bound, Budget,
    CapacityProfile,
};
use crate::batch::FrbCertificate;
use crate::error::Result;
use crate::incidence::{CodeReport, FrCode};

pub const REPORT_SCHEMA: &str = "frepkit-report/1";

/// One comparison between enumeration and a closed form or implication.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub name: &'static str,
    pub k: usize,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

fn check(name: &'static str, k: usize, expected: impl ToString, actual: impl ToString, pass: bool) -> CrossCheck {
    CrossCheck {
        name,
        k,
        expected: expected.to_string(),
        actual: actual.to_string(),
        pass,
    }
}

/// Cross-checks every row of `profile` against the bounds that must hold
/// for any code and, for codes that are simple graphs, against the graph
/// characterizations of `M(k)`.
pub fn cross_checks(code: &FrCode, profile: &CapacityProfile, budget: Budget) -> Result<Vec<CrossCheck>> {
    let alpha = code.alpha();
    let mut out = Vec::new();
    for w in profile.rows.windows(2) {
        out.push(check("monotone", w[1].k, format!(">= {}", w[0].m), w[1].m, w[1].m >= w[0].m));
    }
    for r in &profile.rows {
        let m = r.m as i64;
        out.push(check("phi_upper", r.k, format!("<= {}", r.phi), m, m <= r.phi));
        out.push(check("theta_upper", r.k, format!("<= {}", code.theta()), m, r.m <= code.theta()));
        if let Some(cap) = r.caps.rho2_upper {
            out.push(check("rho2_upper", r.k, format!("<= {cap}"), m, m <= cap));
        }
        if let Some(cap) = r.caps.not_tight_cap {
            out.push(check("not_tight_cap", r.k, format!("<= {cap}"), m, m <= cap));
        }
    }
    let graph = if code.rho() == 2 { code.to_graph().ok() } else { None };
    if let Some(g) = graph {
        let gi = girth(&g);
        for r in &profile.rows {
            let (k, m) = (r.k, r.m as i64);
            let iso = (k * alpha) as i64 - max_induced_edges(&g, k, budget)? as i64;
            out.push(check("isoperimetric", k, iso, m, iso == m));
            let clique = has_k_clique(&g, k);
            out.push(check("clique_iff_mbr", k, clique, m == r.mbr, clique == (m == r.mbr)));
            let long = gi.is_none_or(|g| g > k);
            let at = m == rho2_upper_bound(k, alpha);
            out.push(check("girth_iff_tree_bound", k, long, at, long == at));
            if let Some(gv) = gi {
                if k <= girth_formula_range(gv) {
                    let f = girth_file_size(alpha, gv, k)?;
                    out.push(check("girth_formula", k, f, m, f == m));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeParams {
    pub n: usize,
    pub theta: usize,
    pub alpha: usize,
    pub rho: usize,
}

/// The analysis report, serialized as JSON or rendered as a text table.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub code: CodeParams,
    pub validation: CodeReport,
    pub rows: Vec<super::ProfileRow>,
    pub universally_good: Option<bool>,
    pub optimal: Option<bool>,
    pub checks: Vec<CrossCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frb: Option<FrbCertificate>,
}

impl Report {
    pub fn new(code: &FrCode, profile: CapacityProfile, checks: Vec<CrossCheck>) -> Self {
        Report {
            schema: REPORT_SCHEMA,
            code: CodeParams {
                n: code.n(),
                theta: code.theta(),
                alpha: code.alpha(),
                rho: code.rho(),
            },
            validation: code.validate(),
            rows: profile.rows,
            universally_good: profile.universally_good,
            optimal: profile.optimal,
            checks,
            frb: None,
        }
    }

    pub fn checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let c = &self.code;
        let mut s = format!("code: n={} theta={} alpha={} rho={}\n", c.n, c.theta, c.alpha, c.rho);
        let opt = |v: Option<i64>| v.map_or("-".to_string(), |x| x.to_string());
        let _ = writeln!(s, "{:>3} {:>5} {:>5} {:>5} {:>5} {:>6} {:>6} {:>6} {:>8}", "k", "M", "phi", "phi'", "mbr", "rho2", "gapcap", "k-opt", "notight");
        for r in &self.rows {
            let nt = match r.verdicts.bound_not_tight {
                Some(f) if f.not_tight => "yes",
                Some(_) => "no",
                None => "-",
            };
            let _ = writeln!(
                s,
                "{:>3} {:>5} {:>5} {:>5} {:>5} {:>6} {:>6} {:>6} {:>8}",
                r.k,
                r.m,
                r.phi,
                r.caps.phi_improved,
                r.mbr,
                opt(r.caps.rho2_upper),
                opt(r.caps.not_tight_cap),
                if r.verdicts.k_optimal { "yes" } else { "no" },
                nt
            );
        }
        let verdict = |v: Option<bool>| match v {
            Some(true) => "yes",
            Some(false) => "no",
            None => "n/a (k-max < alpha)",
        };
        let _ = writeln!(s, "universally good: {}", verdict(self.universally_good));
        let _ = writeln!(s, "optimal: {}", verdict(self.optimal));
        let failed: Vec<&CrossCheck> = self.checks.iter().filter(|c| !c.pass).collect();
        let _ = writeln!(s, "cross-checks: {} passed, {} failed", self.checks.len() - failed.len(), failed.len());
        for f in failed {
            let _ = writeln!(s, "  MISMATCH {} at k={}: expected {}, got {}", f.name, f.k, f.expected, f.actual);
        }
        if let Some(frb) = &self.frb {
            s.push_str(&frb.to_text());
        }
        s
    }
}
