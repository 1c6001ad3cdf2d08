//! Edgepaths in the Hatcher–Oertel diagram and the bounds they give.
//!
//! Paths are stored in written order: the leftmost vertex first and the
//! starting vertex `<P/Q>` last. They are traversed from right to left, so
//! every edge is read from `vertices[i + 1]` to `vertices[i]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{DiagramError, OrientedTangleType, PlanarDiagram, Sign, TangleTypes, TypeFamily};
use crate::montesinos::{KnotCondition, MontesinosExpression, RestrictedKind};
use crate::rational::{farey_parents, ContinuedFraction, Fraction, RationalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EdgepathError {
    #[error("empty edgepath")]
    Empty,
    #[error("{0} and {1} are not joined by an edge")]
    NotAdjacent(DVertex, DVertex),
    #[error("reciprocal shift by {shift} hits {vertex}")]
    DivisionByZero { shift: i64, vertex: DVertex },
    #[error("edgepath ends at {0}, not at an integer")]
    NotBasic(DVertex),
    #[error("{0} is an integer; no edgepath starts there")]
    IntegralFraction(Fraction),
    #[error("{0} is not strictly between 0 and 1")]
    NotProperFraction(Fraction),
    #[error("expected {expected} nested tangle types, got {found}")]
    MissingTypes { expected: usize, found: usize },
    #[error("link: {0:?}")]
    Link(KnotCondition),
    #[error("identity violated for {expression}: {detail}")]
    IdentityViolation { expression: String, detail: String },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Rational(#[from] RationalError),
}

/// A vertex of the diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DVertex {
    /// `<p/q>` on the line `u = (q - 1)/q`.
    Angle(Fraction),
    /// `o p/q` on the right edge `u = 1`.
    Circle(Fraction),
    /// `<1/0>` at `u = -1`.
    Infinity,
}

impl DVertex {
    pub fn u(self) -> Fraction {
        match self {
            DVertex::Angle(f) => Fraction::new(f.den() - 1, f.den()).expect("positive denominator"),
            DVertex::Circle(_) => Fraction::ONE,
            DVertex::Infinity => -Fraction::ONE,
        }
    }

    pub fn v(self) -> Option<Fraction> {
        match self {
            DVertex::Angle(f) | DVertex::Circle(f) => Some(f),
            DVertex::Infinity => None,
        }
    }

    pub fn is_integer(self) -> bool {
        matches!(self, DVertex::Angle(f) if f.is_integer())
    }
}

impl From<Fraction> for DVertex {
    fn from(f: Fraction) -> DVertex {
        DVertex::Angle(f)
    }
}

impl fmt::Display for DVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DVertex::Angle(x) => write!(f, "<{x}>"),
            DVertex::Circle(x) => write!(f, "o{x}"),
            DVertex::Infinity => f.write_str("<1/0>"),
        }
    }
}

impl FromStr for DVertex {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<DVertex, RationalError> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix('<').and_then(|b| b.strip_suffix('>')) {
            if body == "1/0" || body == "inf" {
                return Ok(DVertex::Infinity);
            }
            return body.parse().map(DVertex::Angle);
        }
        if let Some(body) = s.strip_prefix('o') {
            return body.parse().map(DVertex::Circle);
        }
        Err(RationalError::Syntax(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    Increasing,
    Decreasing,
    VerticalUp,
    VerticalDown,
    Horizontal,
    Infinity,
}

/// An edge as traversed: from the right vertex `from` to the left one `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DEdge {
    pub from: DVertex,
    pub to: DVertex,
    pub kind: EdgeKind,
}

impl DEdge {
    pub fn new(from: DVertex, to: DVertex) -> Result<DEdge, EdgepathError> {
        use DVertex::*;
        let not_adjacent = || EdgepathError::NotAdjacent(to, from);
        let kind = match (from, to) {
            (Infinity, Angle(z)) | (Angle(z), Infinity) if z.is_integer() => EdgeKind::Infinity,
            (Angle(a), Circle(b)) | (Circle(b), Angle(a)) if a == b => EdgeKind::Horizontal,
            (Angle(a), Angle(b)) if a.is_farey_adjacent(b) => {
                let vertical = a.is_integer() && b.is_integer();
                match (vertical, b > a) {
                    (true, true) => EdgeKind::VerticalUp,
                    (true, false) => EdgeKind::VerticalDown,
                    (false, true) => EdgeKind::Increasing,
                    (false, false) => EdgeKind::Decreasing,
                }
            }
            _ => return Err(not_adjacent()),
        };
        Ok(DEdge { from, to, kind })
    }

    /// `+2` when v falls along the traversal, `-2` when it rises; ∞-edges and
    /// horizontal edges carry nothing.
    pub fn twist(&self) -> i64 {
        match self.kind {
            EdgeKind::Decreasing | EdgeKind::VerticalDown => 2,
            EdgeKind::Increasing | EdgeKind::VerticalUp => -2,
            EdgeKind::Horizontal | EdgeKind::Infinity => 0,
        }
    }
}

pub fn edge_twist(e: &DEdge) -> i64 {
    e.twist()
}

/// Where an edgepath ends, by the u-coordinate of its final vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EndpointType {
    /// Ends at a non-integral vertex, `u > 0`.
    I,
    /// Ends at an integer vertex, `u = 0`.
    II,
    /// Ends at `<1/0>`.
    III,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edgepath {
    vertices: Vec<DVertex>,
}

impl Edgepath {
    /// Validates adjacency of consecutive vertices (written order).
    pub fn new(vertices: Vec<DVertex>) -> Result<Edgepath, EdgepathError> {
        if vertices.is_empty() {
            return Err(EdgepathError::Empty);
        }
        for w in vertices.windows(2) {
            DEdge::new(w[1], w[0])?;
        }
        Ok(Edgepath { vertices })
    }

    pub fn from_fractions(fs: &[Fraction]) -> Result<Edgepath, EdgepathError> {
        Edgepath::new(fs.iter().map(|&f| DVertex::Angle(f)).collect())
    }

    pub fn vertices(&self) -> &[DVertex] {
        &self.vertices
    }

    pub fn start(&self) -> DVertex {
        *self.vertices.last().expect("nonempty")
    }

    pub fn end(&self) -> DVertex {
        self.vertices[0]
    }

    pub fn edges(&self) -> Vec<DEdge> {
        self.vertices
            .windows(2)
            .map(|w| DEdge::new(w[1], w[0]).expect("validated on construction"))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn twist(&self) -> i64 {
        self.edges().iter().map(DEdge::twist).sum()
    }

    pub fn endpoint_type(&self) -> EndpointType {
        match self.end() {
            DVertex::Infinity => EndpointType::III,
            v if v.is_integer() => EndpointType::II,
            _ => EndpointType::I,
        }
    }

    /// `left` written to the left of `self`; the last vertex of `left` must
    /// be adjacent to the first of `self`.
    pub fn prepend(&self, left: &[DVertex]) -> Result<Edgepath, EdgepathError> {
        let mut v = left.to_vec();
        v.extend_from_slice(&self.vertices);
        Edgepath::new(v)
    }

    pub fn transform(&self, op: Transform) -> Result<Edgepath, EdgepathError> {
        reduced_transform(self, op)
    }
}

impl fmt::Display for Edgepath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str("--")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Edgepath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Edgepath({self})")
    }
}

impl FromStr for Edgepath {
    type Err = EdgepathError;

    fn from_str(s: &str) -> Result<Edgepath, EdgepathError> {
        let vertices = s
            .split("--")
            .map(|t| t.parse::<DVertex>())
            .collect::<Result<Vec<_>, _>>()?;
        Edgepath::new(vertices)
    }
}

impl Serialize for Edgepath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Edgepath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Edgepath, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn twist(p: &Edgepath) -> i64 {
    p.twist()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemType {
    I,
    II,
    III,
    /// Paths ending on different lines; such a system is only a formal sum.
    Formal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgepathSystem {
    paths: Vec<Edgepath>,
}

impl EdgepathSystem {
    pub fn new(paths: Vec<Edgepath>) -> EdgepathSystem {
        EdgepathSystem { paths }
    }

    pub fn paths(&self) -> &[Edgepath] {
        &self.paths
    }

    pub fn twist(&self) -> i64 {
        self.paths.iter().map(Edgepath::twist).sum()
    }

    pub fn system_type(&self) -> SystemType {
        let types: Vec<EndpointType> = self.paths.iter().map(Edgepath::endpoint_type).collect();
        if types.iter().all(|&t| t == EndpointType::III) {
            SystemType::III
        } else if types.iter().all(|&t| t == EndpointType::II) {
            SystemType::II
        } else if types.iter().all(|&t| t == EndpointType::I)
            && self.paths.windows(2).all(|w| w[0].end().u() == w[1].end().u())
        {
            SystemType::I
        } else {
            SystemType::Formal
        }
    }

    pub fn is_formal(&self) -> bool {
        self.system_type() == SystemType::Formal
    }
}

pub fn system_twist(s: &EdgepathSystem) -> i64 {
    s.twist()
}

/// Vertex-wise maps on edgepaths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// `x -> a + x`
    Add(i64),
    /// `x -> 1/(a + x)`
    ReciprocalShift(i64),
    /// `x -> -x`
    Negate,
}

fn transform_vertex(v: DVertex, op: Transform) -> Result<DVertex, EdgepathError> {
    let map = |x: Fraction| -> Result<Fraction, EdgepathError> {
        match op {
            Transform::Add(a) => Ok(Fraction::integer(a) + x),
            Transform::Negate => Ok(-x),
            Transform::ReciprocalShift(a) => (Fraction::integer(a) + x)
                .recip()
                .map_err(|_| EdgepathError::DivisionByZero { shift: a, vertex: v }),
        }
    };
    Ok(match v {
        DVertex::Angle(x) => DVertex::Angle(map(x)?),
        DVertex::Circle(x) => DVertex::Circle(map(x)?),
        DVertex::Infinity => match op {
            Transform::ReciprocalShift(_) => DVertex::Angle(Fraction::ZERO),
            _ => DVertex::Infinity,
        },
    })
}

pub fn reduced_transform(p: &Edgepath, op: Transform) -> Result<Edgepath, EdgepathError> {
    let vertices = p
        .vertices
        .iter()
        .map(|&v| transform_vertex(v, op))
        .collect::<Result<Vec<_>, _>>()?;
    Edgepath::new(vertices)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Monotone {
    Increasing,
    Decreasing,
}

/// Leftward path from `<f>` to an integer, stepping to the larger parent
/// (increasing) or the smaller one (decreasing).
pub fn monotone_basic_edgepath(f: Fraction, dir: Monotone) -> Result<Edgepath, EdgepathError> {
    if f.is_integer() {
        return Err(EdgepathError::IntegralFraction(f));
    }
    let mut chain = vec![f];
    let mut x = f;
    while !x.is_integer() {
        let (small, large) = farey_parents(x)?;
        x = match dir {
            Monotone::Increasing => large,
            Monotone::Decreasing => small,
        };
        chain.push(x);
    }
    chain.reverse();
    Edgepath::from_fractions(&chain)
}

/// Integer vertices strictly between `<0>` (inclusive) and `<z>` (exclusive),
/// in written order.
fn vertical_run(z: i64) -> Vec<DVertex> {
    let step = if z >= 0 { 1 } else { -1 };
    (0..z.abs()).map(|i| DVertex::Angle(Fraction::integer(step * i))).collect()
}

/// The monotone paths completed to type II or III: the one moving away from
/// `<0>` goes out to `<1/0>`, the other is joined to `<0>` by vertical edges.
pub fn monotone_edgepath(f: Fraction, dir: Monotone) -> Result<Edgepath, EdgepathError> {
    let basic = monotone_basic_edgepath(f, dir)?;
    let to_infinity = matches!(
        (f.is_positive(), dir),
        (true, Monotone::Increasing) | (false, Monotone::Decreasing)
    );
    if to_infinity {
        complete_type_iii(&basic)
    } else {
        complete_type_ii(&basic)
    }
}

/// A basic edgepath followed by the ∞-edge from its integer end.
pub fn complete_type_iii(basic: &Edgepath) -> Result<Edgepath, EdgepathError> {
    basic.prepend(&[DVertex::Infinity])
}

/// A basic edgepath followed by vertical edges from its integer end to `<0>`.
pub fn complete_type_ii(basic: &Edgepath) -> Result<Edgepath, EdgepathError> {
    match basic.end() {
        DVertex::Angle(z) if z.is_integer() => basic.prepend(&vertical_run(z.num())),
        v => Err(EdgepathError::NotBasic(v)),
    }
}

/// `(Γ_inc, Γ_dec)`.
pub fn monotone_systems(expr: &MontesinosExpression) -> Result<(EdgepathSystem, EdgepathSystem), EdgepathError> {
    let collect = |dir| {
        expr.tangles()
            .iter()
            .map(|&f| monotone_edgepath(f, dir))
            .collect::<Result<Vec<_>, _>>()
            .map(EdgepathSystem::new)
    };
    Ok((collect(Monotone::Increasing)?, collect(Monotone::Decreasing)?))
}

fn unit_fractions_down_to(n: i64) -> Vec<DVertex> {
    (1..=n).map(|d| DVertex::Angle(Fraction::new(1, d).expect("d >= 1"))).collect()
}

/// The path `λ'_s` of an oriented tangle `0 < P/Q < 1`.
///
/// `types[0]` is the type of the tangle itself and `types[i]` that of the
/// sub-tangle `[0, a_{i+2}, ..., a_k]`; there must be one per nesting level.
/// `innermost_sign` is the crossing sign of the innermost `1/a_k` block.
pub fn seifert_lambda_prime(
    f: Fraction,
    types: &[OrientedTangleType],
    innermost_sign: Sign,
) -> Result<Edgepath, EdgepathError> {
    if !(f > Fraction::ZERO && f < Fraction::ONE) {
        return Err(EdgepathError::NotProperFraction(f));
    }
    let cf = ContinuedFraction::standard(f);
    let b = &cf.terms()[1..];
    if types.len() != b.len() {
        return Err(EdgepathError::MissingTypes {
            expected: b.len(),
            found: types.len(),
        });
    }
    let m = b.len();
    let last = b[m - 1];
    let mut path = match innermost_sign {
        Sign::Positive => Edgepath::new(unit_fractions_down_to(last))?,
        Sign::Negative => Edgepath::from_fractions(&[Fraction::ZERO, Fraction::new(1, last)?])?,
    };
    for i in (0..m - 1).rev() {
        let a = b[i];
        let inner = reduced_transform(&path, Transform::ReciprocalShift(a))?;
        let prefix = match types[i + 1].family() {
            TypeFamily::V | TypeFamily::D => vec![DVertex::Angle(Fraction::ZERO)],
            TypeFamily::H => unit_fractions_down_to(a - 1),
        };
        path = inner.prepend(&prefix)?;
    }
    Ok(path)
}

/// The Seifert edgepath `γ_s` of an oriented non-integral tangle.
pub fn seifert_gamma(f: Fraction, types: &TangleTypes) -> Result<Edgepath, EdgepathError> {
    if f.is_integer() {
        return Err(EdgepathError::IntegralFraction(f));
    }
    if f.is_negative() {
        let mirrored = TangleTypes {
            innermost_sign: types.innermost_sign.flip(),
            ..types.clone()
        };
        return reduced_transform(&seifert_gamma(-f, &mirrored)?, Transform::Negate);
    }
    let z = f.floor();
    let lambda = seifert_lambda_prime(f.fractional_part(), &types.levels, types.innermost_sign)?;
    let shifted = reduced_transform(&lambda, Transform::Add(z))?;
    match types.levels[0].family() {
        TypeFamily::V | TypeFamily::D => shifted.prepend(&[DVertex::Infinity]),
        TypeFamily::H => shifted.prepend(&vertical_run(z)),
    }
}

/// `Γ_s` for one of the two orientations of the knot.
pub fn seifert_system(expr: &MontesinosExpression, reverse: bool) -> Result<EdgepathSystem, EdgepathError> {
    let cond = expr.knot_condition();
    if !cond.is_knot() {
        return Err(EdgepathError::Link(cond));
    }
    let d = PlanarDiagram::montesinos(expr).orient(reverse)?;
    seifert_system_on(expr, &d)
}

/// `Γ_s` read off an oriented diagram of the knot.
pub fn seifert_system_on(expr: &MontesinosExpression, oriented: &PlanarDiagram) -> Result<EdgepathSystem, EdgepathError> {
    let paths = expr
        .tangles()
        .iter()
        .enumerate()
        .map(|(i, &f)| seifert_gamma(f, &oriented.tangle_types(i)?))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EdgepathSystem::new(paths))
}

pub fn slope(gamma: &EdgepathSystem, gamma_s: &EdgepathSystem) -> Fraction {
    Fraction::integer(gamma.twist() - gamma_s.twist())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeBoundsReport {
    pub expression: MontesinosExpression,
    pub restricted: MontesinosExpression,
    pub restricted_kind: RestrictedKind,
    pub continued_fractions: Vec<ContinuedFraction>,
    #[serde(rename = "C_plus")]
    pub c_plus: u64,
    #[serde(rename = "C_minus")]
    pub c_minus: u64,
    #[serde(rename = "twist_Gamma_inc")]
    pub twist_inc: i64,
    #[serde(rename = "twist_Gamma_dec")]
    pub twist_dec: i64,
    #[serde(rename = "twist_Gamma_s")]
    pub twist_s: i64,
    pub slope_lower: i64,
    pub slope_upper: i64,
    /// `-2 C_minus`, from the crossing count side.
    pub crossing_lower: i64,
    /// `2 C_plus`, from the crossing count side.
    pub crossing_upper: i64,
    pub verified: bool,
    pub crossing_number: u64,
    pub diameter_bound: u64,
    #[serde(rename = "Gamma_inc")]
    pub gamma_inc: Vec<Edgepath>,
    #[serde(rename = "Gamma_dec")]
    pub gamma_dec: Vec<Edgepath>,
    #[serde(rename = "Gamma_s")]
    pub gamma_s: Vec<Edgepath>,
}

/// Both sides of the slope bounds; a mismatch between them is an error.
pub fn slope_bounds(expr: &MontesinosExpression) -> Result<SlopeBoundsReport, EdgepathError> {
    let cond = expr.knot_condition();
    if !cond.is_knot() {
        return Err(EdgepathError::Link(cond));
    }
    let oriented = PlanarDiagram::montesinos(expr).orient(false)?;
    let (c_plus, c_minus) = oriented.signed_crossing_counts()?;
    let (inc, dec) = monotone_systems(expr)?;
    let gs = seifert_system_on(expr, &oriented)?;
    let slope_lower = inc.twist() - gs.twist();
    let slope_upper = dec.twist() - gs.twist();
    let crossing_lower = -2 * c_minus as i64;
    let crossing_upper = 2 * c_plus as i64;
    if slope_lower != crossing_lower || slope_upper != crossing_upper {
        return Err(EdgepathError::IdentityViolation {
            expression: expr.to_string(),
            detail: format!(
                "edgepath bounds [{slope_lower}, {slope_upper}] but crossing bounds [{crossing_lower}, {crossing_upper}]"
            ),
        });
    }
    let restricted = expr.to_restricted();
    let crossing_number = restricted.expression.standard_crossing_count();
    Ok(SlopeBoundsReport {
        expression: expr.clone(),
        restricted_kind: restricted.kind,
        restricted: restricted.expression,
        continued_fractions: expr.continued_fractions(),
        c_plus,
        c_minus,
        twist_inc: inc.twist(),
        twist_dec: dec.twist(),
        twist_s: gs.twist(),
        slope_lower,
        slope_upper,
        crossing_lower,
        crossing_upper,
        verified: true,
        crossing_number,
        diameter_bound: 2 * crossing_number,
        gamma_inc: inc.paths,
        gamma_dec: dec.paths,
        gamma_s: gs.paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::TangleOrientation;

    fn fr(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    fn path(s: &str) -> Edgepath {
        s.parse().unwrap()
    }

    /// Independent oracle: smaller or larger parent by brute search over the
    /// Farey neighbours with smaller denominator.
    fn parent_chain(f: Fraction, larger: bool) -> Vec<Fraction> {
        let mut out = vec![f];
        let mut x = f;
        while !x.is_integer() {
            let (p, q) = (x.num(), x.den());
            let mut cands: Vec<Fraction> = Vec::new();
            for s in 1..q {
                for r in (p * s / q - 2)..=(p * s / q + 2) {
                    if (p * s - q * r).abs() == 1 {
                        cands.push(fr(r, s));
                    }
                }
            }
            cands.sort();
            cands.dedup();
            assert_eq!(cands.len(), 2, "{x}");
            x = if larger { cands[1] } else { cands[0] };
            out.push(x);
        }
        out.reverse();
        out
    }

    #[test]
    fn vertices_and_coordinates() {
        assert_eq!(DVertex::Angle(fr(1, 3)).u(), fr(2, 3));
        assert_eq!(DVertex::Angle(Fraction::integer(2)).u(), Fraction::ZERO);
        assert_eq!(DVertex::Circle(fr(1, 3)).u(), Fraction::ONE);
        assert_eq!(DVertex::Infinity.u(), -Fraction::ONE);
        assert_eq!(DVertex::Infinity.v(), None);
        for s in ["<1/3>", "o-2/5", "<1/0>", "<0>"] {
            assert_eq!(s.parse::<DVertex>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn edge_twists() {
        let v = |s: &str| s.parse::<DVertex>().unwrap();
        assert_eq!(DEdge::new(v("<1/3>"), v("<1/2>")).unwrap().twist(), -2);
        assert_eq!(DEdge::new(v("<1/3>"), v("<0>")).unwrap().twist(), 2);
        assert_eq!(DEdge::new(v("<1>"), v("<0>")).unwrap().kind, EdgeKind::VerticalDown);
        assert_eq!(DEdge::new(v("<0>"), v("<1/0>")).unwrap().twist(), 0);
        assert_eq!(DEdge::new(v("<1/3>"), v("o1/3")).unwrap().twist(), 0);
        assert!(matches!(DEdge::new(v("<1/3>"), v("<2/3>")), Err(EdgepathError::NotAdjacent(..))));
        assert!(DEdge::new(v("<1/2>"), v("<1/0>")).is_err());
    }

    #[test]
    fn text_form() {
        let p = path("<1>--<1/2>--<1/3>");
        assert_eq!(p.to_string(), "<1>--<1/2>--<1/3>");
        assert_eq!(p.start(), DVertex::Angle(fr(1, 3)));
        assert_eq!(p.twist(), -4);
        assert_eq!(serde_json::to_string(&p).unwrap(), "\"<1>--<1/2>--<1/3>\"");
        assert!("<1>--<1/3>--<1/2>".parse::<Edgepath>().is_err());
        assert_eq!(Edgepath::new(vec![]), Err(EdgepathError::Empty));
        assert_eq!(Edgepath::new(vec![DVertex::Infinity]).unwrap().twist(), 0);
    }

    #[test]
    fn monotone_examples() {
        let inc = monotone_basic_edgepath(fr(1, 3), Monotone::Increasing).unwrap();
        assert_eq!(inc.to_string(), "<1>--<1/2>--<1/3>");
        assert_eq!(inc.twist(), -4);
        let dec = monotone_basic_edgepath(fr(1, 3), Monotone::Decreasing).unwrap();
        assert_eq!(dec.to_string(), "<0>--<1/3>");
        assert_eq!(dec.twist(), 2);
        let dec = monotone_basic_edgepath(fr(3, 10), Monotone::Decreasing).unwrap();
        assert_eq!(dec.to_string(), "<0>--<1/4>--<2/7>--<3/10>");
        assert_eq!(dec.twist(), 6);
        assert!(monotone_basic_edgepath(Fraction::integer(2), Monotone::Increasing).is_err());
    }

    #[test]
    fn monotone_match_parent_oracle() {
        for q in 2..=25 {
            for p in -4 * q..=4 * q {
                let Ok(f) = Fraction::new(p, q) else { continue };
                if f.is_integer() || f.den() != q {
                    continue;
                }
                for (dir, larger, t) in [(Monotone::Increasing, true, -2), (Monotone::Decreasing, false, 2)] {
                    let got = monotone_basic_edgepath(f, dir).unwrap();
                    assert_eq!(got, Edgepath::from_fractions(&parent_chain(f, larger)).unwrap());
                    assert_eq!(got.twist(), t * got.edge_count() as i64);
                }
            }
        }
    }

    #[test]
    fn completed_monotone_examples() {
        let g = monotone_edgepath(fr(5, 2), Monotone::Decreasing).unwrap();
        assert_eq!(g.to_string(), "<0>--<1>--<2>--<5/2>");
        let l = monotone_basic_edgepath(fr(5, 2), Monotone::Decreasing).unwrap();
        assert_eq!(g.twist(), l.twist() + 4);
        assert_eq!(g.endpoint_type(), EndpointType::II);

        let g = monotone_edgepath(fr(1, 3), Monotone::Increasing).unwrap();
        assert_eq!(g.to_string(), "<1/0>--<1>--<1/2>--<1/3>");
        assert_eq!(g.twist(), -4);
        assert_eq!(g.endpoint_type(), EndpointType::III);

        let g = monotone_edgepath(fr(-2, 3), Monotone::Increasing).unwrap();
        assert_eq!(g.to_string(), "<0>--<-1/2>--<-2/3>");
        assert_eq!(g.twist(), -4);

        let g = monotone_edgepath(fr(-7, 3), Monotone::Increasing).unwrap();
        assert_eq!(g.to_string(), "<0>--<-1>--<-2>--<-7/3>");
        assert_eq!(g.twist(), -6);
        let g = monotone_edgepath(fr(-7, 3), Monotone::Decreasing).unwrap();
        assert_eq!(g.endpoint_type(), EndpointType::III);
    }

    #[test]
    fn monotone_system_relations() {
        let e: MontesinosExpression = "1/2,1/3,-2/3".parse().unwrap();
        let (inc, dec) = monotone_systems(&e).unwrap();
        let per: i64 = e
            .tangles()
            .iter()
            .map(|&f| monotone_edgepath(f, Monotone::Increasing).unwrap().twist())
            .sum();
        assert_eq!(inc.twist(), per);
        assert!(inc.twist() <= dec.twist());
        let (minc, mdec) = monotone_systems(&e.mirror()).unwrap();
        assert_eq!(minc.twist(), -dec.twist());
        assert_eq!(mdec.twist(), -inc.twist());
        assert_eq!(inc.system_type(), SystemType::Formal);
    }

    #[test]
    fn transforms() {
        let p = path("<1>--<1/2>");
        assert_eq!(reduced_transform(&p, Transform::Add(1)).unwrap().to_string(), "<2>--<3/2>");
        assert_eq!(
            reduced_transform(&p, Transform::ReciprocalShift(2)).unwrap().to_string(),
            "<1/3>--<2/5>"
        );
        let q = path("<0>--<1/3>");
        let n = reduced_transform(&q, Transform::Negate).unwrap();
        assert_eq!(n.to_string(), "<0>--<-1/3>");
        assert_eq!(n.twist(), -q.twist());
        assert!(matches!(
            reduced_transform(&path("<-1>--<-1/2>"), Transform::ReciprocalShift(1)),
            Err(EdgepathError::DivisionByZero { .. })
        ));
        let inf = path("<1/0>--<1>");
        assert_eq!(reduced_transform(&inf, Transform::ReciprocalShift(1)).unwrap().to_string(), "<0>--<1/2>");
    }

    #[test]
    fn lambda_prime_examples() {
        use OrientedTangleType::*;
        let p = seifert_lambda_prime(fr(1, 3), &[VInf], Sign::Positive).unwrap();
        assert_eq!(p.to_string(), "<1>--<1/2>--<1/3>");
        let p = seifert_lambda_prime(fr(1, 3), &[H0], Sign::Negative).unwrap();
        assert_eq!(p.to_string(), "<0>--<1/3>");
        let p = seifert_lambda_prime(fr(2, 5), &[H1, VInf], Sign::Positive).unwrap();
        assert_eq!(p.to_string(), "<0>--<1/3>--<2/5>");
        assert_eq!(p.twist(), 4);
        assert!(matches!(
            seifert_lambda_prime(fr(2, 5), &[VInf], Sign::Positive),
            Err(EdgepathError::MissingTypes { .. })
        ));
        assert!(seifert_lambda_prime(fr(4, 3), &[VInf], Sign::Positive).is_err());
    }

    #[test]
    fn gamma_examples() {
        use OrientedTangleType::*;
        let t = TangleTypes {
            whole: VInf,
            levels: vec![V1],
            innermost_sign: Sign::Positive,
        };
        let g = seifert_gamma(fr(1, 3), &t).unwrap();
        assert_eq!(g.to_string(), "<1/0>--<1>--<1/2>--<1/3>");
        assert_eq!(g.endpoint_type(), EndpointType::III);

        let t = TangleTypes {
            whole: H1,
            levels: vec![H1],
            innermost_sign: Sign::Negative,
        };
        let g = seifert_gamma(fr(4, 3), &t).unwrap();
        assert_eq!(g.to_string(), "<0>--<1>--<4/3>");
        assert_eq!(g.endpoint_type(), EndpointType::II);

        let t = TangleTypes {
            whole: H0,
            levels: vec![H0, VInf],
            innermost_sign: Sign::Positive,
        };
        let neg = seifert_gamma(fr(-2, 3), &t).unwrap();
        let mirrored = TangleTypes {
            innermost_sign: Sign::Negative,
            ..t
        };
        let pos = seifert_gamma(fr(2, 3), &mirrored).unwrap();
        assert_eq!(neg.twist(), -pos.twist());
    }

    fn corpus() -> Vec<MontesinosExpression> {
        let fs: Vec<Fraction> = [(1, 2), (1, 3), (-2, 3), (3, 10), (-5, 7), (7, 4), (-9, 5), (2, 5), (-1, 4), (11, 3)]
            .iter()
            .map(|&(p, q)| fr(p, q))
            .collect();
        let mut out = Vec::new();
        for &a in &fs {
            for &b in &fs {
                for &c in &fs {
                    let e = MontesinosExpression::validate([a, b, c]).unwrap();
                    if e.is_knot() {
                        out.push(e);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn twist_identities_on_corpus() {
        let corpus = corpus();
        assert!(corpus.len() > 100);
        for e in &corpus {
            let r = slope_bounds(e).unwrap_or_else(|err| panic!("{e}: {err}"));
            assert_eq!(r.slope_lower, -2 * r.c_minus as i64);
            assert_eq!(r.slope_upper, 2 * r.c_plus as i64);
            assert_eq!(r.slope_upper - r.slope_lower, 2 * e.standard_crossing_count() as i64);
            assert_eq!(
                seifert_system(e, false).unwrap().twist(),
                seifert_system(e, true).unwrap().twist()
            );
        }
    }

    #[test]
    fn vertical_edges_need_a_twist() {
        // With vertical edges weighted 0 the identity breaks somewhere.
        let flat = |s: &EdgepathSystem| -> i64 {
            s.paths()
                .iter()
                .flat_map(|p| p.edges())
                .filter(|e| !matches!(e.kind, EdgeKind::VerticalUp | EdgeKind::VerticalDown))
                .map(|e| e.twist())
                .sum()
        };
        let broken = corpus().iter().any(|e| {
            let d = PlanarDiagram::montesinos(e).orient(false).unwrap();
            let (cp, _) = d.signed_crossing_counts().unwrap();
            let (_, dec) = monotone_systems(e).unwrap();
            let gs = seifert_system(e, false).unwrap();
            flat(&dec) - flat(&gs) != 2 * cp as i64
        });
        assert!(broken);
    }

    #[test]
    fn report_for_figure_knot() {
        let e: MontesinosExpression = "1/2,1/3,-2/3".parse().unwrap();
        let r = slope_bounds(&e).unwrap();
        assert_eq!(r.slope_upper - r.slope_lower, 16);
        assert!(r.verified);
        let s = Fraction::integer(r.slope_lower);
        let gs = seifert_system(&e, false).unwrap();
        let (inc, dec) = monotone_systems(&e).unwrap();
        assert_eq!(slope(&inc, &gs), s);
        assert_eq!(slope(&dec, &gs), Fraction::integer(r.slope_upper));
        assert_eq!(slope(&gs, &gs), Fraction::ZERO);
        assert_eq!(gs.twist(), dec.twist() - 2 * r.c_plus as i64);

        let json = serde_json::to_value(&r).unwrap();
        for key in [
            "C_plus",
            "C_minus",
            "twist_Gamma_inc",
            "twist_Gamma_dec",
            "twist_Gamma_s",
            "slope_lower",
            "slope_upper",
            "crossing_number",
            "diameter_bound",
        ] {
            assert!(json.get(key).is_some(), "{key}");
        }
        let back: SlopeBoundsReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);

        let m = slope_bounds(&e.mirror()).unwrap();
        assert_eq!((m.slope_lower, m.slope_upper), (-r.slope_upper, -r.slope_lower));
        assert!(matches!(
            slope_bounds(&"1/2,1/2,1/3".parse().unwrap()),
            Err(EdgepathError::Link(_))
        ));
    }

    /// Per-tangle identities for a standalone tangle in each orientation.
    #[test]
    fn per_tangle_identities() {
        for q in 2..=13 {
            for p in -3 * q..=3 * q {
                let Ok(f) = Fraction::new(p, q) else { continue };
                if f.is_integer() || f.den() != q {
                    continue;
                }
                let d = PlanarDiagram::standard_tangle(&ContinuedFraction::standard(f));
                for o in TangleOrientation::all() {
                    let od = d.orient_tangle(o).unwrap();
                    let (cp, cm) = od.signed_crossing_counts().unwrap();
                    let types = od.tangle_types(0).unwrap();
                    let gs = seifert_gamma(f, &types).unwrap();
                    let inc = monotone_edgepath(f, Monotone::Increasing).unwrap();
                    let dec = monotone_edgepath(f, Monotone::Decreasing).unwrap();
                    assert_eq!(inc.twist() - gs.twist(), -2 * cm as i64, "{f} {o:?}");
                    assert_eq!(dec.twist() - gs.twist(), 2 * cp as i64, "{f} {o:?}");
                }
            }
        }
    }
}
