//! Rendering of reports as JSON, CSV or plain text.

use std::fmt::Write as _;

use mslope_core::enumerate::TwistOrderingReport;
use mslope_core::SlopeBoundsReport;
use serde::Serialize;

use crate::campaign::CampaignSummary;
use crate::Format;

#[derive(Serialize)]
struct BoundsRow<'a> {
    expression: String,
    restricted: String,
    #[serde(rename = "C_plus")]
    c_plus: u64,
    #[serde(rename = "C_minus")]
    c_minus: u64,
    #[serde(rename = "twist_Gamma_inc")]
    twist_inc: i64,
    #[serde(rename = "twist_Gamma_dec")]
    twist_dec: i64,
    #[serde(rename = "twist_Gamma_s")]
    twist_s: i64,
    slope_lower: i64,
    slope_upper: i64,
    crossing_number: u64,
    diameter_bound: u64,
    verified: bool,
    #[serde(rename = "Gamma_s")]
    gamma_s: &'a str,
}

fn csv_string<T: Serialize>(rows: impl IntoIterator<Item = T>) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn render_bounds(reports: &[SlopeBoundsReport], format: Format) -> anyhow::Result<String> {
    match format {
        Format::Json => {
            let mut s = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])?
            } else {
                serde_json::to_string_pretty(reports)?
            };
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let gammas: Vec<String> = reports
                .iter()
                .map(|r| r.gamma_s.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" | "))
                .collect();
            csv_string(reports.iter().zip(&gammas).map(|(r, g)| BoundsRow {
                expression: r.expression.to_string(),
                restricted: r.restricted.to_string(),
                c_plus: r.c_plus,
                c_minus: r.c_minus,
                twist_inc: r.twist_inc,
                twist_dec: r.twist_dec,
                twist_s: r.twist_s,
                slope_lower: r.slope_lower,
                slope_upper: r.slope_upper,
                crossing_number: r.crossing_number,
                diameter_bound: r.diameter_bound,
                verified: r.verified,
                gamma_s: g,
            }))
        }
        Format::Plain => {
            let mut s = String::new();
            for r in reports {
                plain_bounds(&mut s, r);
            }
            Ok(s)
        }
    }
}

fn plain_bounds(s: &mut String, r: &SlopeBoundsReport) {
    writeln!(s, "M({})", r.expression).unwrap();
    writeln!(s, "  restricted      M({}) [{:?}]", r.restricted, r.restricted_kind).unwrap();
    let cfs: Vec<String> = r.continued_fractions.iter().map(|c| c.to_string()).collect();
    writeln!(s, "  expansions      {}", cfs.join(" ")).unwrap();
    writeln!(s, "  C+ / C-         {} / {}", r.c_plus, r.c_minus).unwrap();
    writeln!(
        s,
        "  twists          inc {}  dec {}  s {}",
        r.twist_inc, r.twist_dec, r.twist_s
    )
    .unwrap();
    writeln!(s, "  slope bounds    [{}, {}]", r.slope_lower, r.slope_upper).unwrap();
    writeln!(s, "  crossing bounds [{}, {}]", r.crossing_lower, r.crossing_upper).unwrap();
    writeln!(s, "  verified        {}", r.verified).unwrap();
    writeln!(s, "  crossing number {}", r.crossing_number).unwrap();
    writeln!(s, "  diameter bound  {}", r.diameter_bound).unwrap();
    for (name, paths) in [("Gamma_inc", &r.gamma_inc), ("Gamma_dec", &r.gamma_dec), ("Gamma_s", &r.gamma_s)] {
        writeln!(s, "  {name}").unwrap();
        for p in paths {
            writeln!(s, "    {p}").unwrap();
        }
    }
}

#[derive(Serialize)]
struct PropertyRow<'a> {
    property: &'a str,
    pass: usize,
    fail: usize,
    skipped: usize,
}

pub fn render_summary(summary: &CampaignSummary, format: Format) -> anyhow::Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(summary)? + "\n"),
        Format::Csv => csv_string(summary.properties.iter().map(|(k, c)| PropertyRow {
            property: k,
            pass: c.pass,
            fail: c.fail,
            skipped: c.skipped,
        })),
        Format::Plain => {
            let mut s = String::new();
            writeln!(s, "expressions {} (seed {})", summary.expressions, summary.config.seed)?;
            for (k, c) in &summary.properties {
                writeln!(s, "{k:<32} pass {:>6}  fail {:>4}  skipped {:>4}", c.pass, c.fail, c.skipped)?;
            }
            for f in &summary.failures {
                writeln!(s, "FAIL {} M({}): {}", f.property, f.expression, f.detail)?;
            }
            Ok(s)
        }
    }
}

#[derive(Serialize)]
struct OrderingRow {
    expression: String,
    candidates: usize,
    ordering_pass: usize,
    ordering_fail: usize,
    bound_pass: usize,
    bound_fail: usize,
    #[serde(rename = "twist_Gamma_inc")]
    twist_inc: i64,
    #[serde(rename = "twist_Gamma_dec")]
    twist_dec: i64,
    min_twist: Option<i64>,
    max_twist: Option<i64>,
}

fn opt(x: Option<i64>) -> String {
    x.map_or_else(|| "-".to_string(), |t| t.to_string())
}

pub fn render_ordering(reports: &[TwistOrderingReport], format: Format) -> anyhow::Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(reports)? + "\n"),
        Format::Csv => csv_string(reports.iter().map(|r| OrderingRow {
            expression: r.expression.to_string(),
            candidates: r.candidates,
            ordering_pass: r.ordering_pass,
            ordering_fail: r.ordering_fail,
            bound_pass: r.bound_pass,
            bound_fail: r.bound_fail,
            twist_inc: r.twist_inc,
            twist_dec: r.twist_dec,
            min_twist: r.min_twist,
            max_twist: r.max_twist,
        })),
        Format::Plain => {
            let mut s = String::new();
            for r in reports {
                writeln!(
                    s,
                    "M({}): {} candidates, ordering {}/{}, bounds {}/{}, twist range {}..{} within [{}, {}]",
                    r.expression,
                    r.candidates,
                    r.ordering_pass,
                    r.candidates,
                    r.bound_pass,
                    r.candidates,
                    opt(r.min_twist),
                    opt(r.max_twist),
                    r.twist_inc,
                    r.twist_dec
                )?;
                for v in &r.violations {
                    let paths: Vec<String> = v.system.iter().map(|p| p.to_string()).collect();
                    writeln!(s, "  VIOLATION {:?} {}: {}", v.kind, paths.join(" | "), v.reason)?;
                }
            }
            Ok(s)
        }
    }
}
