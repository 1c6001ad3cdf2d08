//! Brute-force enumeration of basic edgepaths and type II/III candidate
//! systems, used to check the twist ordering and the slope bounds.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::PlanarDiagram;
use crate::edgepath::{
    complete_type_ii, complete_type_iii, monotone_basic_edgepath, monotone_systems, seifert_system, DVertex, Edgepath,
    EdgepathError, EdgepathSystem, Monotone,
};
use crate::montesinos::MontesinosExpression;
use crate::rational::{farey_parents, Fraction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("{what} limit {limit} exceeded")]
    LimitExceeded { what: &'static str, limit: usize },
    #[error(transparent)]
    Edgepath(#[from] EdgepathError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationLimits {
    pub max_denominator: i64,
    pub max_paths_per_tangle: usize,
    pub max_systems: usize,
    /// Forbid two consecutive edges on one triangle.
    pub minimality: bool,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_denominator: 1000,
            max_paths_per_tangle: 100_000,
            max_systems: 1_000_000,
            minimality: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CandidateKind {
    TypeII,
    TypeIII,
}

/// All leftward paths from `<f>` to an integer through Farey parents, sorted
/// by vertex sequence.
pub fn enumerate_minimal_basic_edgepaths(
    f: Fraction,
    limits: &EnumerationLimits,
) -> Result<Vec<Edgepath>, EnumerationError> {
    if f.is_integer() {
        return Err(EdgepathError::IntegralFraction(f).into());
    }
    if f.den() > limits.max_denominator {
        return Err(EnumerationError::LimitExceeded {
            what: "denominator",
            limit: limits.max_denominator as usize,
        });
    }
    let mut out = Vec::new();
    let mut chain = vec![f];
    walk(&mut chain, None, limits, &mut out)?;
    let mut paths = out
        .into_iter()
        .map(|mut c: Vec<Fraction>| {
            c.reverse();
            Edgepath::from_fractions(&c)
        })
        .collect::<Result<Vec<_>, _>>()?;
    paths.sort();
    Ok(paths)
}

/// `forbidden` is the parent of the previous vertex not taken; stepping to it
/// would run along two sides of one triangle.
fn walk(
    chain: &mut Vec<Fraction>,
    forbidden: Option<Fraction>,
    limits: &EnumerationLimits,
    out: &mut Vec<Vec<Fraction>>,
) -> Result<(), EnumerationError> {
    let x = *chain.last().expect("nonempty");
    if x.is_integer() {
        if out.len() == limits.max_paths_per_tangle {
            return Err(EnumerationError::LimitExceeded {
                what: "paths per tangle",
                limit: limits.max_paths_per_tangle,
            });
        }
        out.push(chain.clone());
        return Ok(());
    }
    let (small, large) = farey_parents(x).map_err(EdgepathError::from)?;
    for (next, other) in [(small, large), (large, small)] {
        if limits.minimality && Some(next) == forbidden {
            continue;
        }
        chain.push(next);
        walk(chain, Some(other), limits, out)?;
        chain.pop();
    }
    Ok(())
}

/// Every combination of completed basic edgepaths, one per tangle.
pub fn assemble_candidate_systems(
    expr: &MontesinosExpression,
    kind: CandidateKind,
    limits: &EnumerationLimits,
) -> Result<Vec<EdgepathSystem>, EnumerationError> {
    let per_tangle = expr
        .tangles()
        .iter()
        .map(|&f| {
            enumerate_minimal_basic_edgepaths(f, limits)?
                .iter()
                .map(|p| match kind {
                    CandidateKind::TypeII => complete_type_ii(p),
                    CandidateKind::TypeIII => complete_type_iii(p),
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(EnumerationError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let total = per_tangle
        .iter()
        .try_fold(1usize, |acc, v| acc.checked_mul(v.len()))
        .filter(|&n| n <= limits.max_systems)
        .ok_or(EnumerationError::LimitExceeded {
            what: "systems",
            limit: limits.max_systems,
        })?;
    let mut systems = Vec::with_capacity(total);
    let mut index = vec![0usize; per_tangle.len()];
    for _ in 0..total {
        systems.push(EdgepathSystem::new(
            index.iter().zip(&per_tangle).map(|(&i, v)| v[i].clone()).collect(),
        ));
        for (slot, v) in index.iter_mut().zip(&per_tangle).rev() {
            *slot += 1;
            if *slot < v.len() {
                break;
            }
            *slot = 0;
        }
    }
    Ok(systems)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: CandidateKind,
    pub system: Vec<Edgepath>,
    pub twist: i64,
    pub slope: i64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistOrderingReport {
    pub expression: MontesinosExpression,
    pub candidates: usize,
    pub ordering_pass: usize,
    pub ordering_fail: usize,
    pub bound_pass: usize,
    pub bound_fail: usize,
    #[serde(rename = "twist_Gamma_inc")]
    pub twist_inc: i64,
    #[serde(rename = "twist_Gamma_dec")]
    pub twist_dec: i64,
    #[serde(rename = "twist_Gamma_s")]
    pub twist_s: i64,
    pub min_twist: Option<i64>,
    pub max_twist: Option<i64>,
    #[serde(rename = "C_plus")]
    pub c_plus: u64,
    #[serde(rename = "C_minus")]
    pub c_minus: u64,
    pub violations: Vec<Violation>,
}

impl TwistOrderingReport {
    pub fn passed(&self) -> bool {
        self.ordering_fail == 0 && self.bound_fail == 0
    }
}

/// Checks `twist(Γ_inc) <= twist(Γ) <= twist(Γ_dec)` and
/// `-2 C_- <= slope(Γ) <= 2 C_+` on every type II and type III candidate.
pub fn verify_twist_ordering(
    expr: &MontesinosExpression,
    limits: &EnumerationLimits,
) -> Result<TwistOrderingReport, EnumerationError> {
    let gs = seifert_system(expr, false)?;
    let (inc, dec) = monotone_systems(expr)?;
    let oriented = PlanarDiagram::montesinos(expr).orient(false).map_err(EdgepathError::from)?;
    let (c_plus, c_minus) = oriented.signed_crossing_counts().map_err(EdgepathError::from)?;
    let (lo, hi) = (-2 * c_minus as i64, 2 * c_plus as i64);
    let mut report = TwistOrderingReport {
        expression: expr.clone(),
        candidates: 0,
        ordering_pass: 0,
        ordering_fail: 0,
        bound_pass: 0,
        bound_fail: 0,
        twist_inc: inc.twist(),
        twist_dec: dec.twist(),
        twist_s: gs.twist(),
        min_twist: None,
        max_twist: None,
        c_plus,
        c_minus,
        violations: Vec::new(),
    };
    for kind in [CandidateKind::TypeII, CandidateKind::TypeIII] {
        for system in assemble_candidate_systems(expr, kind, limits)? {
            let t = system.twist();
            let s = t - report.twist_s;
            report.candidates += 1;
            report.min_twist = Some(report.min_twist.map_or(t, |m| m.min(t)));
            report.max_twist = Some(report.max_twist.map_or(t, |m| m.max(t)));
            let mut reasons = Vec::new();
            if report.twist_inc <= t && t <= report.twist_dec {
                report.ordering_pass += 1;
            } else {
                report.ordering_fail += 1;
                reasons.push(format!("twist {t} outside [{}, {}]", report.twist_inc, report.twist_dec));
            }
            if lo <= s && s <= hi {
                report.bound_pass += 1;
            } else {
                report.bound_fail += 1;
                reasons.push(format!("slope {s} outside [{lo}, {hi}]"));
            }
            if !reasons.is_empty() {
                report.violations.push(Violation {
                    kind,
                    system: system.paths().to_vec(),
                    twist: t,
                    slope: s,
                    reason: reasons.join("; "),
                });
            }
        }
    }
    Ok(report)
}

/// True when the path enumerates `λ_inc` or `λ_dec` of its start.
pub fn is_monotone(p: &Edgepath) -> bool {
    let DVertex::Angle(f) = p.start() else { return false };
    [Monotone::Increasing, Monotone::Decreasing]
        .into_iter()
        .any(|d| monotone_basic_edgepath(f, d).as_ref() == Ok(p))
}
