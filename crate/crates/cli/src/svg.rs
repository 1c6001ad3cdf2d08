//! Static SVG of a window of the diagram with the three bound systems.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use mslope_core::edgepath::{DVertex, Edgepath};
use mslope_core::{Fraction, SlopeBoundsReport};

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 60.0;
const UNIT: f64 = 120.0;

fn to_f64(f: Fraction) -> f64 {
    f.num() as f64 / f.den() as f64
}

struct Frame {
    v_top: f64,
    height: f64,
}

impl Frame {
    fn x(&self, u: Fraction) -> f64 {
        MARGIN + (to_f64(u) + 1.0) / 2.0 * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        MARGIN + (self.v_top - v) * UNIT
    }
}

/// `<1/0>` has no v-coordinate; it is drawn at the left edge, level with the
/// integer vertex it is joined to.
fn points(p: &Edgepath) -> Vec<(Fraction, f64)> {
    let vs = p.vertices();
    vs.iter()
        .enumerate()
        .map(|(i, &v)| match v.v() {
            Some(y) => (v.u(), to_f64(y)),
            None => {
                let neighbour = if i + 1 < vs.len() { vs[i + 1] } else { vs[i.saturating_sub(1)] };
                (v.u(), neighbour.v().map_or(0.0, to_f64))
            }
        })
        .collect()
}

fn label(v: DVertex) -> String {
    match v {
        DVertex::Angle(f) => format!("⟨{f}⟩"),
        DVertex::Circle(f) => format!("∘{f}"),
        DVertex::Infinity => "⟨1/0⟩".to_string(),
    }
}

pub fn render(report: &SlopeBoundsReport) -> String {
    let systems = [
        ("gamma-inc", "#1f77b4", &report.gamma_inc),
        ("gamma-dec", "#d62728", &report.gamma_dec),
        ("gamma-s", "#2ca02c", &report.gamma_s),
    ];
    let all: Vec<&Edgepath> = systems.iter().flat_map(|(_, _, ps)| ps.iter()).collect();
    let vs: Vec<f64> = all.iter().flat_map(|p| points(p)).map(|(_, v)| v).collect();
    let v_min = vs.iter().cloned().fold(f64::INFINITY, f64::min).floor() - 0.5;
    let v_max = vs.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ceil() + 0.5;
    let frame = Frame {
        v_top: v_max,
        height: (v_max - v_min) * UNIT + 2.0 * MARGIN,
    };

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{h:.1}" viewBox="0 0 {WIDTH} {h:.1}">"#,
        h = frame.height
    )
    .unwrap();
    writeln!(s, "<title>M({})</title>", report.expression).unwrap();
    writeln!(
        s,
        "<style>polyline{{fill:none;stroke-width:2}} .axis{{stroke:#999;stroke-width:1}} text{{font:11px sans-serif}}</style>"
    )
    .unwrap();

    // u = -1, 0, 1 guides
    for u in [-Fraction::ONE, Fraction::ZERO, Fraction::ONE] {
        let x = frame.x(u);
        writeln!(
            s,
            r#"<line class="axis" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
            frame.y(v_max),
            frame.y(v_min)
        )
        .unwrap();
    }

    for (class, colour, paths) in systems {
        for (i, p) in paths.iter().enumerate() {
            let pts: Vec<String> = points(p)
                .into_iter()
                .map(|(u, v)| format!("{:.2},{:.2}", frame.x(u), frame.y(v)))
                .collect();
            writeln!(
                s,
                r#"<polyline class="{class}" data-tangle="{i}" stroke="{colour}" points="{}"><title>{p}</title></polyline>"#,
                pts.join(" ")
            )
            .unwrap();
        }
    }

    let mut seen = BTreeSet::new();
    for p in &all {
        for (v, (u, y)) in p.vertices().iter().zip(points(p)) {
            if !seen.insert((*v, (y * 1e6) as i64)) {
                continue;
            }
            let (x, y) = (frame.x(u), frame.y(y));
            writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5"/>"#).unwrap();
            writeln!(s, r#"<text class="vertex" x="{:.2}" y="{:.2}">{}</text>"#, x + 4.0, y - 4.0, label(*v)).unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}
