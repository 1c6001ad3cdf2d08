//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if a
//! gating criterion fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mslope::campaign::{generate, CampaignConfig};
use mslope_core::diagram::{PlanarDiagram, Sign, TangleOrientation, TypeFamily};
use mslope_core::edgepath::{
    complete_type_ii, complete_type_iii, monotone_basic_edgepath, monotone_systems, seifert_lambda_prime,
    seifert_system, seifert_system_on, slope_bounds, Monotone,
};
use mslope_core::enumerate::{enumerate_minimal_basic_edgepaths, EnumerationLimits};
use mslope_core::{ContinuedFraction, Fraction, MontesinosExpression};
use rayon::prelude::*;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], detail: String) -> Outcome {
        let mut detail = detail;
        if let Some(first) = failures.first() {
            detail = format!("{detail}; {} failures, first: {first}", failures.len());
        }
        Outcome {
            passed: failures.is_empty(),
            detail,
        }
    }
}

fn frac(p: i64, q: i64) -> Fraction {
    Fraction::new(p, q).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn knot_corpus() -> Vec<MontesinosExpression> {
    generate(&CampaignConfig::default()).expect("default campaign config is valid")
}

fn mixed_corpus() -> Vec<MontesinosExpression> {
    generate(&CampaignConfig {
        knots_only: false,
        seed: 43,
        ..CampaignConfig::default()
    })
    .expect("valid config")
}

fn twist_crossing_identities(corpus: &[MontesinosExpression]) -> Outcome {
    let start = Instant::now();
    let failures: Vec<String> = corpus
        .par_iter()
        .filter_map(|e| {
            let run = || -> Result<Option<String>, Box<dyn std::error::Error>> {
                let (inc, dec) = monotone_systems(e)?;
                let s = seifert_system(e, false)?;
                let d = PlanarDiagram::montesinos(e).orient(false)?;
                let (cp, cm) = d.signed_crossing_counts()?;
                let (cp, cm) = (cp as i64, cm as i64);
                if inc.twist() - s.twist() != -2 * cm || dec.twist() - s.twist() != 2 * cp {
                    return Ok(Some(format!(
                        "M({e}): inc {} dec {} s {} vs C+ {cp} C- {cm}",
                        inc.twist(),
                        dec.twist(),
                        s.twist()
                    )));
                }
                Ok(None)
            };
            run().unwrap_or_else(|err| Some(format!("M({e}): {err}")))
        })
        .collect();
    let elapsed = start.elapsed();
    let mut failures = failures;
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("took {}", secs(elapsed)));
    }
    Outcome::new(&failures, format!("{} knots in {}", corpus.len(), secs(elapsed)))
}

fn unit_tangle_closed_forms() -> Outcome {
    let mut failures = Vec::new();
    let mut seen = [false, false];
    let mut checked = 0;
    for a in 2..=20i64 {
        let f = frac(1, a);
        let inc = monotone_basic_edgepath(f, Monotone::Increasing).unwrap().twist();
        let dec = monotone_basic_edgepath(f, Monotone::Decreasing).unwrap().twist();
        if inc != -2 * (a - 1) || dec != 2 {
            failures.push(format!("1/{a}: twists inc {inc} dec {dec}"));
        }
        let base = PlanarDiagram::standard_tangle(&ContinuedFraction::standard(f));
        for o in TangleOrientation::all() {
            let d = base.orient_tangle(o).unwrap();
            let (cp, cm) = d.signed_crossing_counts().unwrap();
            let types = d.tangle_types(0).unwrap();
            let lambda = seifert_lambda_prime(f, &types.levels, types.innermost_sign).unwrap().twist();
            let (want_counts, want_lambda) = match types.innermost_sign {
                Sign::Positive => {
                    seen[0] = true;
                    ((a as u64, 0), -2 * (a - 1))
                }
                Sign::Negative => {
                    seen[1] = true;
                    ((0, a as u64), 2)
                }
            };
            if (cp, cm) != want_counts || lambda != want_lambda {
                failures.push(format!("1/{a} {o:?}: C {:?} lambda' {lambda}", (cp, cm)));
            }
            if inc - lambda != -2 * cm as i64 || dec - lambda != 2 * cp as i64 {
                failures.push(format!("1/{a} {o:?}: differences do not match counts"));
            }
            checked += 1;
        }
    }
    if !seen[0] || !seen[1] {
        failures.push(format!("signs seen {seen:?}"));
    }
    Outcome::new(&failures, format!("{checked} oriented unit tangles"))
}

fn vertical_nestings() -> Outcome {
    let mut failures = Vec::new();
    let mut nestings = 0;
    for q in 2..=13i64 {
        for p in 1..q {
            let ta = frac(p, q);
            if ta.den() != q {
                continue;
            }
            let a_base = PlanarDiagram::standard_tangle(&ContinuedFraction::standard(ta));
            let oriented_a: Vec<PlanarDiagram> = TangleOrientation::all()
                .into_iter()
                .map(|o| a_base.orient_tangle(o).unwrap())
                .collect();
            for a in 1..=4i64 {
                let tb = (Fraction::integer(a) + ta).recip().unwrap();
                let b_base = PlanarDiagram::standard_tangle(&ContinuedFraction::standard(tb));
                for o in TangleOrientation::all() {
                    let db = b_base.orient_tangle(o).unwrap();
                    let types_b = db.tangle_types(0).unwrap();
                    if types_b.levels[1].family() != TypeFamily::V {
                        continue;
                    }
                    nestings += 1;
                    let label = format!("T_A {ta}, a {a}, {o:?}");
                    let inward = db.inward_marked(0, 2).unwrap();
                    let matches: Vec<&PlanarDiagram> = oriented_a
                        .iter()
                        .filter(|d| d.inward_corners().unwrap() == inward)
                        .collect();
                    let [da] = matches[..] else {
                        failures.push(format!("{label}: {} matching orientations of D_A", matches.len()));
                        continue;
                    };
                    let types_a = da.tangle_types(0).unwrap();
                    if types_a.whole != types_b.levels[1] || types_a.innermost_sign != types_b.innermost_sign {
                        failures.push(format!("{label}: inherited type or sign differs"));
                    }
                    let (bp, bm) = db.signed_crossing_counts().unwrap();
                    let (ap, am) = da.signed_crossing_counts().unwrap();
                    if bp != am || bm != ap + a as u64 {
                        failures.push(format!("{label}: C(D_B) {:?} C(D_A) {:?}", (bp, bm), (ap, am)));
                    }
                    let twist = |f, dir| monotone_basic_edgepath(f, dir).unwrap().twist();
                    let lambda_a = seifert_lambda_prime(ta, &types_a.levels, types_a.innermost_sign).unwrap();
                    let lambda_b = seifert_lambda_prime(tb, &types_b.levels, types_b.innermost_sign).unwrap();
                    let inc = twist(tb, Monotone::Increasing) == -2 * (a - 1) - twist(ta, Monotone::Decreasing);
                    let dec = twist(tb, Monotone::Decreasing) == 2 - twist(ta, Monotone::Increasing);
                    let seif = lambda_b.twist() == 2 - lambda_a.twist();
                    if !(inc && dec && seif) {
                        failures.push(format!("{label}: twist recursions inc {inc} dec {dec} seifert {seif}"));
                    }
                }
            }
        }
    }
    if nestings < 200 {
        failures.push(format!("only {nestings} nestings"));
    }
    Outcome::new(&failures, format!("{nestings} nestings"))
}

struct CandidateTwists {
    type_ii: Vec<i64>,
    type_iii: Vec<i64>,
}

fn candidate_twists(f: Fraction, limits: &EnumerationLimits) -> CandidateTwists {
    let basic = enumerate_minimal_basic_edgepaths(f, limits).unwrap();
    CandidateTwists {
        type_ii: basic.iter().map(|p| complete_type_ii(p).unwrap().twist()).collect(),
        type_iii: basic.iter().map(|p| complete_type_iii(p).unwrap().twist()).collect(),
    }
}

fn enumerated_candidates() -> Outcome {
    let start = Instant::now();
    let limits = EnumerationLimits::default();
    let mut fractions = Vec::new();
    for q in 2..=7i64 {
        for p in -2 * q + 1..2 * q {
            let f = frac(p, q);
            if f.den() == q {
                fractions.push(f);
            }
        }
    }
    let cache: HashMap<Fraction, CandidateTwists> =
        fractions.iter().map(|&f| (f, candidate_twists(f, &limits))).collect();
    let mut triples = Vec::new();
    for &x in &fractions {
        for &y in &fractions {
            for &z in &fractions {
                triples.push([x, y, z]);
            }
        }
    }
    let results: Vec<(usize, usize, Option<String>)> = triples
        .par_iter()
        .filter_map(|t| {
            let e = MontesinosExpression::validate(t.to_vec()).unwrap();
            if !e.is_knot() {
                return None;
            }
            let d = PlanarDiagram::montesinos(&e).orient(false).unwrap();
            let s = seifert_system_on(&e, &d).unwrap().twist();
            let (cp, cm) = d.signed_crossing_counts().unwrap();
            let (lo, hi) = (-2 * cm as i64, 2 * cp as i64);
            let [a, b, c] = t.map(|f| &cache[&f]);
            let mut candidates = 0;
            let mut bad = None;
            for (xs, ys, zs) in [
                (&a.type_ii, &b.type_ii, &c.type_ii),
                (&a.type_iii, &b.type_iii, &c.type_iii),
            ] {
                for x in xs {
                    for y in ys {
                        for z in zs {
                            candidates += 1;
                            let slope = x + y + z - s;
                            if (slope < lo || slope > hi) && bad.is_none() {
                                bad = Some(format!("M({e}): slope {slope} outside [{lo}, {hi}]"));
                            }
                        }
                    }
                }
            }
            Some((1, candidates, bad))
        })
        .collect();
    let knots: usize = results.iter().map(|r| r.0).sum();
    let candidates: usize = results.iter().map(|r| r.1).sum();
    let mut failures: Vec<String> = results.into_iter().filter_map(|r| r.2).collect();
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        failures.push(format!("took {}", secs(elapsed)));
    }
    Outcome::new(
        &failures,
        format!(
            "{} fractions, {knots} knots, {candidates} candidate systems in {}",
            fractions.len(),
            secs(elapsed)
        ),
    )
}

fn symmetries(knots: &[MontesinosExpression], mixed: &[MontesinosExpression]) -> Outcome {
    let mut failures: Vec<String> = knots
        .par_iter()
        .flat_map_iter(|e| {
            let mut out = Vec::new();
            let r = slope_bounds(e).unwrap();
            let m = slope_bounds(&e.mirror()).unwrap();
            if (m.c_plus, m.c_minus) != (r.c_minus, r.c_plus)
                || (m.slope_lower, m.slope_upper) != (-r.slope_upper, -r.slope_lower)
            {
                out.push(format!("M({e}): mirror"));
            }
            let forward = seifert_system(e, false).unwrap().twist();
            let backward = seifert_system(e, true).unwrap().twist();
            if forward != backward {
                out.push(format!("M({e}): twist(Gamma_s) {forward} vs {backward}"));
            }
            out
        })
        .collect();
    let mut links = 0;
    for e in knots.iter().chain(mixed) {
        let n = PlanarDiagram::montesinos(e).count_components().unwrap();
        links += usize::from(n > 1);
        if (n == 1) != e.is_knot() {
            failures.push(format!("M({e}): {n} components"));
        }
    }
    Outcome::new(
        &failures,
        format!("{} knots, {} mixed expressions ({links} links)", knots.len(), mixed.len()),
    )
}

fn restricted_forms(knots: &[MontesinosExpression], mixed: &[MontesinosExpression]) -> Outcome {
    let mut failures = Vec::new();
    let mut diameters = 0;
    let inputs: Vec<MontesinosExpression> = knots
        .iter()
        .chain(mixed)
        .flat_map(|e| [e.clone(), e.to_restricted().expression])
        .collect();
    for e in &inputs {
        let r = e.to_restricted();
        if r.expression.restricted_kind() != Some(r.kind) {
            failures.push(format!("M({e}): lands in {:?}", r.expression.restricted_kind()));
        }
        if r.expression.to_restricted() != r {
            failures.push(format!("M({e}): not idempotent"));
        }
        if r.expression.sum() != e.sum() || r.expression.is_knot() != e.is_knot() {
            failures.push(format!("M({e}): sum or knot type changed"));
        }
        if r.expression.standard_crossing_count() > e.standard_crossing_count() {
            failures.push(format!("M({e}): crossings grew"));
        }
        if e.restricted_kind().is_some() && e.is_knot() {
            diameters += 1;
            let b = slope_bounds(e).unwrap();
            if b.diameter_bound as i64 != b.slope_upper - b.slope_lower {
                failures.push(format!(
                    "M({e}): diameter {} vs [{}, {}]",
                    b.diameter_bound, b.slope_lower, b.slope_upper
                ));
            }
        }
    }
    Outcome::new(
        &failures,
        format!("{} inputs, {diameters} diameter checks", inputs.len()),
    )
}

fn pretzel_cross_check() -> Outcome {
    let e: MontesinosExpression = "-1/2,1/3,1/7".parse().unwrap();
    let r = slope_bounds(&e).unwrap();
    let slopes = [frac(0, 1), frac(16, 1), frac(37, 2), frac(18, 1), frac(19, 1), frac(20, 1)];
    let (lo, hi) = (Fraction::integer(r.slope_lower), Fraction::integer(r.slope_upper));
    let failures: Vec<String> = slopes
        .iter()
        .filter(|&&s| s < lo || s > hi)
        .map(|s| format!("{s} outside"))
        .collect();
    Outcome::new(&failures, format!("interval [{}, {}]", r.slope_lower, r.slope_upper))
}

fn main() -> ExitCode {
    let knots = knot_corpus();
    let mixed = mixed_corpus();
    let criteria: Vec<(&str, bool, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 twist and crossing count identities", true, Box::new(|| twist_crossing_identities(&knots))),
        ("2 unit tangle closed forms", true, Box::new(unit_tangle_closed_forms)),
        ("3 vertical nesting relations", true, Box::new(vertical_nestings)),
        ("4 enumerated candidates within bounds", true, Box::new(enumerated_candidates)),
        ("5 symmetry suite", true, Box::new(|| symmetries(&knots, &mixed))),
        ("6 restricted form suite", true, Box::new(|| restricted_forms(&knots, &mixed))),
        ("7 pretzel slope cross-check", false, Box::new(pretzel_cross_check)),
    ];
    let mut ok = true;
    for (name, gating, run) in criteria {
        let outcome = run();
        let status = match (outcome.passed, gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (informational)",
        };
        println!("acceptance {name}: {status} ({})", outcome.detail);
        ok &= outcome.passed || !gating;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
