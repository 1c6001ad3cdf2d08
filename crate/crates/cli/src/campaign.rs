//! Seeded random expressions and verification campaigns.

use std::collections::BTreeMap;

use log::{debug, info};
use mslope_core::diagram::PlanarDiagram;
use mslope_core::edgepath::{seifert_system, slope_bounds};
use mslope_core::enumerate::{verify_twist_ordering, EnumerationError, EnumerationLimits};
use mslope_core::{Fraction, MontesinosExpression};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const REJECTION_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CampaignError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("no knot found after {0} draws")]
    RejectionBudget(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub count: usize,
    pub seed: u64,
    pub min_tangles: usize,
    pub max_tangles: usize,
    pub max_denominator: i64,
    /// Bound on `|P/Q|`, so numerators satisfy `|P| <= max_magnitude * Q`.
    pub max_magnitude: i64,
    pub knots_only: bool,
    pub limits: EnumerationLimits,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            count: 1000,
            seed: 42,
            min_tangles: 3,
            max_tangles: 6,
            max_denominator: 12,
            max_magnitude: 4,
            knots_only: true,
            limits: EnumerationLimits {
                max_systems: 20_000,
                ..EnumerationLimits::default()
            },
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), CampaignError> {
        if self.min_tangles < 3 || self.max_tangles < self.min_tangles {
            return Err(CampaignError::Config(format!(
                "tangle range {}..={} must start at 3 or more",
                self.min_tangles, self.max_tangles
            )));
        }
        if self.max_denominator < 2 || self.max_magnitude < 1 {
            return Err(CampaignError::Config(
                "denominator bound must be at least 2 and magnitude bound at least 1".into(),
            ));
        }
        Ok(())
    }
}

fn random_fraction(config: &CampaignConfig, rng: &mut ChaCha8Rng) -> Fraction {
    loop {
        let q = rng.gen_range(2..=config.max_denominator);
        let bound = config.max_magnitude * q;
        let p = rng.gen_range(-bound..=bound);
        let f = Fraction::new(p, q).expect("q >= 2");
        if !f.is_integer() {
            return f;
        }
    }
}

/// Draws N uniformly, then each tangle; in knot mode redraws until the knot
/// condition holds.
pub fn random_expression(config: &CampaignConfig, rng: &mut ChaCha8Rng) -> Result<MontesinosExpression, CampaignError> {
    config.validate()?;
    for _ in 0..REJECTION_BUDGET {
        let n = rng.gen_range(config.min_tangles..=config.max_tangles);
        let fs: Vec<Fraction> = (0..n).map(|_| random_fraction(config, rng)).collect();
        let e = MontesinosExpression::validate(fs).expect("non-integral finite tangles");
        if !config.knots_only || e.is_knot() {
            return Ok(e);
        }
    }
    Err(CampaignError::RejectionBudget(REJECTION_BUDGET))
}

pub fn generate(config: &CampaignConfig) -> Result<Vec<MontesinosExpression>, CampaignError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.count).map(|_| random_expression(config, &mut rng)).collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCount {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Failure {
    pub property: String,
    pub expression: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub config: CampaignConfig,
    pub expressions: usize,
    pub properties: BTreeMap<String, PropertyCount>,
    pub failures: Vec<Failure>,
}

impl CampaignSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const IDENTITIES: &str = "twist_crossing_identities";
pub const MIRROR: &str = "mirror_symmetry";
pub const ORIENTATION: &str = "orientation_invariance";
pub const COMPONENTS: &str = "knot_condition_vs_components";
pub const RESTRICTED: &str = "restricted_form";
pub const ORDERING: &str = "enumerated_twist_ordering";

enum Outcome {
    Pass,
    Fail(String),
    Skip,
}

fn check_identities(e: &MontesinosExpression) -> Outcome {
    match slope_bounds(e) {
        Ok(_) => Outcome::Pass,
        Err(err) => Outcome::Fail(err.to_string()),
    }
}

fn check_mirror(e: &MontesinosExpression) -> Outcome {
    let (Ok(r), Ok(m)) = (slope_bounds(e), slope_bounds(&e.mirror())) else {
        return Outcome::Fail("bounds unavailable".into());
    };
    if (m.c_plus, m.c_minus) != (r.c_minus, r.c_plus) {
        return Outcome::Fail(format!("C+/C- {:?} vs mirror {:?}", (r.c_plus, r.c_minus), (m.c_plus, m.c_minus)));
    }
    if (m.slope_lower, m.slope_upper) != (-r.slope_upper, -r.slope_lower) {
        return Outcome::Fail(format!(
            "bounds [{}, {}] vs mirror [{}, {}]",
            r.slope_lower, r.slope_upper, m.slope_lower, m.slope_upper
        ));
    }
    Outcome::Pass
}

fn check_orientation(e: &MontesinosExpression) -> Outcome {
    match (seifert_system(e, false), seifert_system(e, true)) {
        (Ok(a), Ok(b)) if a.twist() == b.twist() => Outcome::Pass,
        (Ok(a), Ok(b)) => Outcome::Fail(format!("twist {} vs {}", a.twist(), b.twist())),
        (Err(err), _) | (_, Err(err)) => Outcome::Fail(err.to_string()),
    }
}

fn check_components(e: &MontesinosExpression) -> Outcome {
    match PlanarDiagram::montesinos(e).count_components() {
        Ok(n) if (n == 1) == e.is_knot() => Outcome::Pass,
        Ok(n) => Outcome::Fail(format!("{n} components, condition says knot = {}", e.is_knot())),
        Err(err) => Outcome::Fail(err.to_string()),
    }
}

fn check_restricted(e: &MontesinosExpression) -> Outcome {
    let r = e.to_restricted();
    let again = r.expression.to_restricted();
    if again != r {
        return Outcome::Fail(format!("not idempotent: {} then {}", r.expression, again.expression));
    }
    if r.expression.sum() != e.sum() || r.expression.is_knot() != e.is_knot() {
        return Outcome::Fail("sum or knot type changed".into());
    }
    if r.expression.standard_crossing_count() > e.standard_crossing_count() {
        return Outcome::Fail(format!(
            "crossings grew from {} to {}",
            e.standard_crossing_count(),
            r.expression.standard_crossing_count()
        ));
    }
    Outcome::Pass
}

fn check_ordering(e: &MontesinosExpression, limits: &EnumerationLimits) -> Outcome {
    match verify_twist_ordering(e, limits) {
        Ok(r) if r.passed() => Outcome::Pass,
        Ok(r) => Outcome::Fail(format!("{} violations, first: {}", r.violations.len(), r.violations[0].reason)),
        Err(EnumerationError::LimitExceeded { .. }) => Outcome::Skip,
        Err(err) => Outcome::Fail(err.to_string()),
    }
}

fn check_all(e: &MontesinosExpression, limits: &EnumerationLimits) -> Vec<(&'static str, Outcome)> {
    let mut out = vec![(COMPONENTS, check_components(e)), (RESTRICTED, check_restricted(e))];
    if e.is_knot() {
        out.push((IDENTITIES, check_identities(e)));
        out.push((MIRROR, check_mirror(e)));
        out.push((ORIENTATION, check_orientation(e)));
        out.push((ORDERING, check_ordering(e, limits)));
    }
    out
}

/// Runs every property over a seeded corpus. The summary depends only on
/// the config.
pub fn cmd_verify(config: &CampaignConfig) -> Result<CampaignSummary, CampaignError> {
    let corpus = if config.count == 0 { Vec::new() } else { generate(config)? };
    info!("verifying {} expressions (seed {})", corpus.len(), config.seed);
    Ok(verify_corpus(config.clone(), &corpus))
}

pub fn verify_corpus(config: CampaignConfig, corpus: &[MontesinosExpression]) -> CampaignSummary {
    let results: Vec<_> = corpus
        .par_iter()
        .map(|e| {
            debug!("checking {e}");
            (e.to_string(), check_all(e, &config.limits))
        })
        .collect();
    let mut properties: BTreeMap<String, PropertyCount> = BTreeMap::new();
    let mut failures = Vec::new();
    for (text, outcomes) in results {
        for (name, outcome) in outcomes {
            let c = properties.entry(name.to_string()).or_default();
            match outcome {
                Outcome::Pass => c.pass += 1,
                Outcome::Skip => c.skipped += 1,
                Outcome::Fail(detail) => {
                    c.fail += 1;
                    failures.push(Failure {
                        property: name.to_string(),
                        expression: text.clone(),
                        detail,
                    });
                }
            }
        }
    }
    failures.sort();
    CampaignSummary {
        config,
        expressions: corpus.len(),
        properties,
        failures,
    }
}
