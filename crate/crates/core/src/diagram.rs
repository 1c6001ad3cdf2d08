//! Standard diagrams of rational tangles and Montesinos knots.
//!
//! A diagram is a combinatorial object: crossings with four slots, pass-through
//! markers, and arcs pairing slot ends. Every crossing slot carries a position
//! (NE, NW, SW, SE) in the frame of the diagram, which is all the geometry the
//! crossing-sign rule needs. The reflection in the NW–SE diagonal swaps the NE
//! and SW positions, so signs invert under it exactly.
//!
//! Markers record the four corners of every nested sub-tangle `[0, a_j, ..., a_k]`
//! at the moment it is formed; tracing the orientation through them gives the
//! oriented type of each sub-tangle in its own frame.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::montesinos::MontesinosExpression;
use crate::rational::{ContinuedFraction, ExtendedFraction, Fraction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("operation needs a closed diagram")]
    OpenDiagram,
    #[error("operation needs a four-ended tangle diagram")]
    ClosedDiagram,
    #[error("diagram is not oriented")]
    Unoriented,
    #[error("diagram has {0} components, expected one")]
    MultiComponent(usize),
    #[error("diagram carries no construction history")]
    NoHistory,
    #[error("construction history evaluates to the tangle 1/0")]
    InfiniteTangle,
    #[error("boundary orientation is inconsistent: {0}")]
    InconsistentOrientation(String),
    #[error("crossings of twist row {term} in tangle {tangle} do not share one sign")]
    NonUniformRow { tangle: usize, term: usize },
    #[error("no sub-tangle markers for tangle {tangle} level {level}")]
    MissingMarkers { tangle: usize, level: usize },
    #[error("malformed PD code: {0}")]
    MalformedPd(String),
}

/// Corner (or slot) positions, listed counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Corner {
    NE,
    NW,
    SW,
    SE,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::NW, Corner::NE, Corner::SW, Corner::SE];

    fn ccw_index(self) -> usize {
        match self {
            Corner::NE => 0,
            Corner::NW => 1,
            Corner::SW => 2,
            Corner::SE => 3,
        }
    }

    fn position(self) -> (i32, i32) {
        match self {
            Corner::NE => (1, 1),
            Corner::NW => (-1, 1),
            Corner::SW => (-1, -1),
            Corner::SE => (1, -1),
        }
    }

    /// Reflection in the line from top left to bottom right.
    pub fn reflect_diagonal(self) -> Corner {
        match self {
            Corner::NE => Corner::SW,
            Corner::SW => Corner::NE,
            c => c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn from_i64(x: i64) -> Sign {
        if x > 0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_i64(self.value() * rhs.value())
    }
}

/// Which twist row a crossing came from: term `term` (zero-based) of the
/// expansion of tangle `tangle`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistSite {
    pub tangle: usize,
    pub term: usize,
}

/// A crossing with slots `0..4`. Slots `s` and `s + 2` are joined by one
/// strand; `over` is the smaller slot of the over strand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    slot_pos: [Corner; 4],
    over: u8,
    pub site: TwistSite,
}

impl Crossing {
    fn new(over: u8, site: TwistSite) -> Crossing {
        Crossing {
            slot_pos: [Corner::NE, Corner::NW, Corner::SW, Corner::SE],
            over,
            site,
        }
    }

    pub fn slot_position(&self, slot: u8) -> Corner {
        self.slot_pos[slot as usize]
    }

    pub fn is_over_slot(&self, slot: u8) -> bool {
        slot % 2 == self.over
    }

    /// Slots in counterclockwise order of their positions.
    pub fn ccw_slots(&self) -> [u8; 4] {
        let mut slots = [0u8, 1, 2, 3];
        slots.sort_by_key(|&s| self.slot_pos[s as usize].ccw_index());
        slots
    }

    /// Sign the crossing would get with both strands running from their
    /// lower slot to their higher one. Flips under diagonal reflection.
    pub fn handedness(&self) -> Sign {
        let over = (self.over, self.over + 2);
        let under = (1 - self.over, 3 - self.over);
        self.sign_for(over, under)
    }

    /// The local sign rule: `+1` iff turning the under-strand direction a
    /// quarter turn counterclockwise gives the over-strand direction.
    fn sign_for(&self, over: (u8, u8), under: (u8, u8)) -> Sign {
        let dir = |(from, to): (u8, u8)| {
            let (a, b) = (self.slot_pos[from as usize].position(), self.slot_pos[to as usize].position());
            (b.0 - a.0, b.1 - a.1)
        };
        let o = dir(over);
        let u = dir(under);
        let turned = (-u.1, u.0);
        if turned == o {
            Sign::Positive
        } else {
            debug_assert_eq!(turned, (-o.0, -o.1));
            Sign::Negative
        }
    }
}

/// Pass-through point on the boundary of a nested sub-tangle.
///
/// `level` 0 is the whole tangle; level `j >= 1` is the sub-tangle
/// `[0, a_{j+1}, ..., a_k]` (one-based terms), formed just after a reflection.
/// `corner` is named in that sub-tangle's own frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Marker {
    pub tangle: usize,
    pub level: usize,
    pub corner: Corner,
}

/// One end of an arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Crossing { id: usize, slot: u8 },
    /// `outer` is the side facing away from the marked sub-tangle.
    Marker { id: usize, outer: bool },
    /// Open boundary point of a tangle diagram.
    Corner(Corner),
}

impl End {
    fn through(self) -> Option<End> {
        match self {
            End::Crossing { id, slot } => Some(End::Crossing { id, slot: (slot + 2) % 4 }),
            End::Marker { id, outer } => Some(End::Marker { id, outer: !outer }),
            End::Corner(_) => None,
        }
    }

    fn shifted(self, crossings: usize, markers: usize) -> End {
        match self {
            End::Crossing { id, slot } => End::Crossing { id: id + crossings, slot },
            End::Marker { id, outer } => End::Marker { id: id + markers, outer },
            c => c,
        }
    }
}

/// Key used while gluing: ends of the parts plus their temporary terminals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum GlueKey {
    End(End),
    Terminal(u8, Corner),
}

fn glue(
    mut mates: BTreeMap<GlueKey, GlueKey>,
    joins: &[(GlueKey, GlueKey)],
    rename: &[(GlueKey, Corner)],
) -> (BTreeMap<End, End>, usize) {
    let mut free_loops = 0;
    for &(t1, t2) in joins {
        let a = mates.remove(&t1).expect("terminal present");
        let b = mates.remove(&t2).expect("terminal present");
        if a == t2 {
            free_loops += 1;
            continue;
        }
        mates.insert(a, b);
        mates.insert(b, a);
    }
    let lookup: HashMap<GlueKey, Corner> = rename.iter().copied().collect();
    let conv = |k: GlueKey| match k {
        GlueKey::End(e) => e,
        t => End::Corner(lookup[&t]),
    };
    let out = mates.into_iter().map(|(k, v)| (conv(k), conv(v))).collect();
    (out, free_loops)
}

/// Set of ends at which the traversal arrives at their node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    incoming: BTreeSet<End>,
}

impl Orientation {
    pub fn is_incoming(&self, e: End) -> bool {
        self.incoming.contains(&e)
    }
}

/// Orientation of the two strands of a tangle diagram. The first strand is
/// the one through NW; the second is the other one, identified by its first
/// corner in the order NW, NE, SW, SE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TangleOrientation {
    pub nw_strand_enters_at_nw: bool,
    pub other_strand_enters_at_first_corner: bool,
}

impl TangleOrientation {
    pub fn all() -> [TangleOrientation; 4] {
        let o = |a, b| TangleOrientation {
            nw_strand_enters_at_nw: a,
            other_strand_enters_at_first_corner: b,
        };
        [o(true, true), o(true, false), o(false, true), o(false, false)]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarDiagram {
    crossings: Vec<Crossing>,
    markers: Vec<Marker>,
    mates: BTreeMap<End, End>,
    open: bool,
    free_loops: usize,
    history: Option<Vec<i64>>,
    orientation: Option<Orientation>,
}

/// The six oriented tangle classes, up to reversing both strands.
///
/// The subscript is the strand connectivity (`0` horizontal, `Inf` vertical,
/// `1` diagonal); the letter says where the two inward corners sit: on one
/// side (H), on top or bottom (V), or diagonally opposite (D).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrientedTangleType {
    H0,
    D0,
    VInf,
    DInf,
    V1,
    H1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Connectivity {
    /// NW–NE and SW–SE, parity class `0/1`.
    Zero,
    /// NW–SW and NE–SE, parity class `1/0`.
    Infinity,
    /// NW–SE and NE–SW, parity class `1/1`.
    One,
}

impl Connectivity {
    /// Parity class `(P mod 2)/(Q mod 2)` of a fraction.
    pub fn of_fraction(f: Fraction) -> Connectivity {
        match (f.num().rem_euclid(2), f.den().rem_euclid(2)) {
            (0, _) => Connectivity::Zero,
            (_, 0) => Connectivity::Infinity,
            _ => Connectivity::One,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeFamily {
    H,
    V,
    D,
}

impl OrientedTangleType {
    pub fn connectivity(self) -> Connectivity {
        match self {
            OrientedTangleType::H0 | OrientedTangleType::D0 => Connectivity::Zero,
            OrientedTangleType::VInf | OrientedTangleType::DInf => Connectivity::Infinity,
            OrientedTangleType::V1 | OrientedTangleType::H1 => Connectivity::One,
        }
    }

    pub fn family(self) -> TypeFamily {
        match self {
            OrientedTangleType::H0 | OrientedTangleType::H1 => TypeFamily::H,
            OrientedTangleType::VInf | OrientedTangleType::V1 => TypeFamily::V,
            OrientedTangleType::D0 | OrientedTangleType::DInf => TypeFamily::D,
        }
    }

    /// Classifies from the strand through NW and the set of inward corners.
    pub fn from_boundary(
        nw_partner: Corner,
        inward: &[Corner],
    ) -> Result<OrientedTangleType, DiagramError> {
        let pairs = match nw_partner {
            Corner::NE => [(Corner::NW, Corner::NE), (Corner::SW, Corner::SE)],
            Corner::SW => [(Corner::NW, Corner::SW), (Corner::NE, Corner::SE)],
            Corner::SE => [(Corner::NW, Corner::SE), (Corner::NE, Corner::SW)],
            Corner::NW => {
                return Err(DiagramError::InconsistentOrientation(
                    "NW cannot pair with itself".into(),
                ))
            }
        };
        for (a, b) in pairs {
            if inward.contains(&a) == inward.contains(&b) {
                return Err(DiagramError::InconsistentOrientation(format!(
                    "strand {a:?}-{b:?} needs exactly one inward end"
                )));
            }
        }
        let nw_in = inward.contains(&Corner::NW);
        let partner_of_nw_side = |c: Corner| inward.contains(&c) == nw_in;
        let family = if partner_of_nw_side(Corner::SW) {
            TypeFamily::H
        } else if partner_of_nw_side(Corner::NE) {
            TypeFamily::V
        } else {
            TypeFamily::D
        };
        use OrientedTangleType::*;
        let ty = match (nw_partner, family) {
            (Corner::NE, TypeFamily::H) => H0,
            (Corner::NE, TypeFamily::D) => D0,
            (Corner::SW, TypeFamily::V) => VInf,
            (Corner::SW, TypeFamily::D) => DInf,
            (Corner::SE, TypeFamily::V) => V1,
            (Corner::SE, TypeFamily::H) => H1,
            _ => unreachable!("excluded by the strand check"),
        };
        Ok(ty)
    }
}

impl fmt::Display for OrientedTangleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrientedTangleType::H0 => "H0",
            OrientedTangleType::D0 => "D0",
            OrientedTangleType::VInf => "Vinf",
            OrientedTangleType::DInf => "Dinf",
            OrientedTangleType::V1 => "V1",
            OrientedTangleType::H1 => "H1",
        };
        f.write_str(s)
    }
}

/// Oriented data of one tangle, as consumed by the Seifert edgepath recursion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangleTypes {
    /// Type of the whole tangle.
    pub whole: OrientedTangleType,
    /// `levels[j - 1]` is the type of `[0, a_{j+1}, ..., a_k]`; the first
    /// entry is the fractional part, the last the innermost `1/a_k` block.
    pub levels: Vec<OrientedTangleType>,
    /// Crossing sign of the innermost block, in that block's own frame.
    pub innermost_sign: Sign,
}

impl PlanarDiagram {
    fn row(a: i64, site: TwistSite) -> PlanarDiagram {
        let n = a.unsigned_abs() as usize;
        let over = if a > 0 { 1 } else { 0 };
        let crossings = vec![Crossing::new(over, site); n];
        let mut d = PlanarDiagram {
            crossings,
            markers: Vec::new(),
            mates: BTreeMap::new(),
            open: true,
            free_loops: 0,
            history: Some(vec![a]),
            orientation: None,
        };
        if n == 0 {
            d.link(End::Corner(Corner::NW), End::Corner(Corner::NE));
            d.link(End::Corner(Corner::SW), End::Corner(Corner::SE));
            return d;
        }
        let slot = |id: usize, c: Corner| End::Crossing {
            id,
            slot: c.ccw_index() as u8,
        };
        d.link(End::Corner(Corner::NW), slot(0, Corner::NW));
        d.link(End::Corner(Corner::SW), slot(0, Corner::SW));
        for i in 0..n - 1 {
            d.link(slot(i, Corner::NE), slot(i + 1, Corner::NW));
            d.link(slot(i, Corner::SE), slot(i + 1, Corner::SW));
        }
        d.link(slot(n - 1, Corner::NE), End::Corner(Corner::NE));
        d.link(slot(n - 1, Corner::SE), End::Corner(Corner::SE));
        d
    }

    fn link(&mut self, a: End, b: End) {
        self.mates.insert(a, b);
        self.mates.insert(b, a);
    }

    fn mate(&self, e: End) -> End {
        self.mates[&e]
    }

    /// `|a|` crossings in a horizontal row; the tangle `a`.
    pub fn integer_tangle(a: i64) -> PlanarDiagram {
        PlanarDiagram::row(a, TwistSite { tangle: 0, term: 0 })
    }

    /// Reflects in the NW–SE diagonal (fraction `F -> 1/F`).
    pub fn reflect_diagonal(&self) -> Result<PlanarDiagram, DiagramError> {
        if !self.open {
            return Err(DiagramError::ClosedDiagram);
        }
        let mut d = self.clone();
        d.reflect_in_place();
        d.history = None;
        Ok(d)
    }

    fn reflect_in_place(&mut self) {
        for c in &mut self.crossings {
            for p in &mut c.slot_pos {
                *p = p.reflect_diagonal();
            }
        }
        let flip = |e: End| match e {
            End::Corner(c) => End::Corner(c.reflect_diagonal()),
            e => e,
        };
        self.mates = self.mates.iter().map(|(&k, &v)| (flip(k), flip(v))).collect();
        self.orientation = None;
    }

    /// Mirror image through the page: every crossing changes over/under.
    pub fn crossing_flip(&self) -> PlanarDiagram {
        let mut d = self.clone();
        for c in &mut d.crossings {
            c.over = 1 - c.over;
        }
        d.history = d.history.map(|h| h.iter().map(|a| -a).collect());
        d
    }

    /// Horizontal sum: `left` NE/SE joined to `right` NW/SW.
    fn beside(left: &PlanarDiagram, right: &PlanarDiagram) -> PlanarDiagram {
        debug_assert!(left.open && right.open);
        let (nc, nm) = (left.crossings.len(), left.markers.len());
        let key = |side: u8, shift: bool, e: End| match e {
            End::Corner(c) => GlueKey::Terminal(side, c),
            e if shift => GlueKey::End(e.shifted(nc, nm)),
            e => GlueKey::End(e),
        };
        let mut mates = BTreeMap::new();
        for (&k, &v) in &left.mates {
            mates.insert(key(0, false, k), key(0, false, v));
        }
        for (&k, &v) in &right.mates {
            mates.insert(key(1, true, k), key(1, true, v));
        }
        let t = GlueKey::Terminal;
        let (mates, loops) = glue(
            mates,
            &[(t(0, Corner::NE), t(1, Corner::NW)), (t(0, Corner::SE), t(1, Corner::SW))],
            &[
                (t(0, Corner::NW), Corner::NW),
                (t(0, Corner::SW), Corner::SW),
                (t(1, Corner::NE), Corner::NE),
                (t(1, Corner::SE), Corner::SE),
            ],
        );
        let mut crossings = left.crossings.clone();
        crossings.extend(right.crossings.iter().cloned());
        let mut markers = left.markers.clone();
        markers.extend(right.markers.iter().copied());
        PlanarDiagram {
            crossings,
            markers,
            mates,
            open: true,
            free_loops: left.free_loops + right.free_loops + loops,
            history: None,
            orientation: None,
        }
    }

    /// Puts pass-through markers on the four corners.
    fn wrap(&mut self, tangle: usize, level: usize) {
        for corner in Corner::ALL {
            let id = self.markers.len();
            self.markers.push(Marker { tangle, level, corner });
            let inside = self.mates.remove(&End::Corner(corner)).expect("open corner");
            self.mates.remove(&inside);
            self.link(inside, End::Marker { id, outer: false });
            self.link(End::Marker { id, outer: true }, End::Corner(corner));
        }
    }

    /// Reflected `self` followed by the row `a`: the expansion `[a, ...self]`.
    pub fn extend(&self, a: i64) -> Result<PlanarDiagram, DiagramError> {
        if !self.open {
            return Err(DiagramError::ClosedDiagram);
        }
        let mut inner = self.clone();
        inner.reflect_in_place();
        let site = TwistSite { tangle: 0, term: 0 };
        let mut d = PlanarDiagram::beside(&inner, &PlanarDiagram::row(a, site));
        d.history = self.history.as_ref().map(|h| {
            let mut v = vec![a];
            v.extend_from_slice(h);
            v
        });
        Ok(d)
    }

    /// Standard diagram for an expansion, with sub-tangle markers.
    pub fn standard_tangle(cf: &ContinuedFraction) -> PlanarDiagram {
        PlanarDiagram::standard_tangle_in(cf, 0)
    }

    fn standard_tangle_in(cf: &ContinuedFraction, tangle: usize) -> PlanarDiagram {
        let terms = cf.terms();
        let k = terms.len();
        let site = |term| TwistSite { tangle, term };
        let mut d = PlanarDiagram::row(terms[k - 1], site(k - 1));
        for j in (0..k - 1).rev() {
            d.reflect_in_place();
            d.wrap(tangle, j + 1);
            d = PlanarDiagram::beside(&d, &PlanarDiagram::row(terms[j], site(j)));
        }
        d.history = Some(terms.to_vec());
        d
    }

    /// The fraction recomputed from the recorded construction steps.
    pub fn fraction(&self) -> Result<Fraction, DiagramError> {
        let history = self.history.as_ref().ok_or(DiagramError::NoHistory)?;
        let (&last, rest) = history.split_last().ok_or(DiagramError::NoHistory)?;
        let mut value = ExtendedFraction::Finite(Fraction::integer(last));
        for &a in rest.iter().rev() {
            let recip = match value {
                ExtendedFraction::Infinity => Fraction::ZERO,
                ExtendedFraction::Finite(f) if f == Fraction::ZERO => {
                    value = ExtendedFraction::Infinity;
                    continue;
                }
                ExtendedFraction::Finite(f) => f.recip().expect("nonzero"),
            };
            value = ExtendedFraction::Finite(Fraction::integer(a) + recip);
        }
        match value {
            ExtendedFraction::Finite(f) => Ok(f),
            ExtendedFraction::Infinity => Err(DiagramError::InfiniteTangle),
        }
    }

    /// Tangles side by side, tops and bottoms joined left to right, and the
    /// outermost corners closed over and under the row.
    pub fn montesinos(expr: &MontesinosExpression) -> PlanarDiagram {
        let mut acc: Option<PlanarDiagram> = None;
        for (i, cf) in expr.continued_fractions().iter().enumerate() {
            let mut d = PlanarDiagram::standard_tangle_in(cf, i);
            d.wrap(i, 0);
            acc = Some(match acc {
                None => d,
                Some(prev) => PlanarDiagram::beside(&prev, &d),
            });
        }
        acc.expect("at least one tangle").numerator_closure()
    }

    /// Joins NW to NE and SW to SE.
    pub fn numerator_closure(&self) -> PlanarDiagram {
        let key = |e: End| match e {
            End::Corner(c) => GlueKey::Terminal(0, c),
            e => GlueKey::End(e),
        };
        let mates = self.mates.iter().map(|(&k, &v)| (key(k), key(v))).collect();
        let t = |c| GlueKey::Terminal(0, c);
        let (mates, loops) = glue(
            mates,
            &[(t(Corner::NW), t(Corner::NE)), (t(Corner::SW), t(Corner::SE))],
            &[],
        );
        PlanarDiagram {
            crossings: self.crossings.clone(),
            markers: self.markers.clone(),
            mates,
            open: false,
            free_loops: self.free_loops + loops,
            history: None,
            orientation: None,
        }
    }

    pub fn is_open(&self) -> bool {
        self.open
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn markers(&self) -> &[Marker] {
        &self.markers
    }

    pub fn orientation(&self) -> Option<&Orientation> {
        self.orientation.as_ref()
    }

    fn node_ends(&self) -> Vec<End> {
        let mut ends = Vec::with_capacity(4 * self.crossings.len() + 2 * self.markers.len());
        for id in 0..self.crossings.len() {
            for slot in 0..4 {
                ends.push(End::Crossing { id, slot });
            }
        }
        for id in 0..self.markers.len() {
            ends.push(End::Marker { id, outer: false });
            ends.push(End::Marker { id, outer: true });
        }
        ends
    }

    /// Follows a strand from an end at which it arrives, marking arrivals,
    /// until it closes up or reaches an open corner.
    fn walk(&self, start: End, incoming: &mut BTreeSet<End>, seen: &mut BTreeSet<End>) -> Option<Corner> {
        let mut e = start;
        loop {
            incoming.insert(e);
            seen.insert(e);
            let Some(out) = e.through() else {
                let End::Corner(c) = e else { unreachable!() };
                return Some(c);
            };
            seen.insert(out);
            let next = self.mate(out);
            if next == start {
                return None;
            }
            e = next;
        }
    }

    pub fn count_components(&self) -> Result<usize, DiagramError> {
        if self.open {
            return Err(DiagramError::OpenDiagram);
        }
        let mut seen = BTreeSet::new();
        let mut scratch = BTreeSet::new();
        let mut count = self.free_loops;
        for e in self.node_ends() {
            if !seen.contains(&e) {
                self.walk(e, &mut scratch, &mut seen);
                count += 1;
            }
        }
        Ok(count)
    }

    fn orient_closed(&self) -> Orientation {
        let mut seen = BTreeSet::new();
        let mut incoming = BTreeSet::new();
        for e in self.node_ends() {
            if !seen.contains(&e) {
                self.walk(e, &mut incoming, &mut seen);
            }
        }
        Orientation { incoming }
    }

    fn reversed(&self, o: &Orientation) -> Orientation {
        let mut incoming: BTreeSet<End> = self
            .node_ends()
            .into_iter()
            .filter(|e| !o.incoming.contains(e))
            .collect();
        for c in Corner::ALL {
            let e = End::Corner(c);
            if self.open && !o.incoming.contains(&e) {
                incoming.insert(e);
            }
        }
        Orientation { incoming }
    }

    /// Orients a one-component closed diagram; `reverse` picks the other of
    /// the two orientations.
    pub fn orient(&self, reverse: bool) -> Result<PlanarDiagram, DiagramError> {
        let n = self.count_components()?;
        if n != 1 {
            return Err(DiagramError::MultiComponent(n));
        }
        let mut o = self.orient_closed();
        if reverse {
            o = self.reversed(&o);
        }
        let mut d = self.clone();
        d.orientation = Some(o);
        Ok(d)
    }

    /// Orients each component of a closed diagram from its least end.
    pub fn orient_components(&self) -> Result<PlanarDiagram, DiagramError> {
        if self.open {
            return Err(DiagramError::OpenDiagram);
        }
        let mut d = self.clone();
        d.orientation = Some(self.orient_closed());
        Ok(d)
    }

    /// The corner at the far end of the strand entering at `c`.
    fn partner_corner(&self, c: Corner) -> Corner {
        let mut scratch = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let first = self.mate(End::Corner(c));
        match first {
            End::Corner(other) => other,
            e => self.walk(e, &mut scratch, &mut seen).expect("strand of an open tangle ends on a corner"),
        }
    }

    fn orient_strand_from(&self, c: Corner, incoming: &mut BTreeSet<End>, seen: &mut BTreeSet<End>) {
        seen.insert(End::Corner(c));
        match self.mate(End::Corner(c)) {
            End::Corner(other) => {
                incoming.insert(End::Corner(other));
                seen.insert(End::Corner(other));
            }
            e => {
                self.walk(e, incoming, seen);
            }
        }
    }

    pub fn orient_tangle(&self, choice: TangleOrientation) -> Result<PlanarDiagram, DiagramError> {
        if !self.open {
            return Err(DiagramError::ClosedDiagram);
        }
        let mut incoming = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let nw_partner = self.partner_corner(Corner::NW);
        let first_start = if choice.nw_strand_enters_at_nw { Corner::NW } else { nw_partner };
        self.orient_strand_from(first_start, &mut incoming, &mut seen);
        let other = Corner::ALL
            .into_iter()
            .find(|&c| c != Corner::NW && c != nw_partner)
            .expect("four corners");
        let other_partner = self.partner_corner(other);
        let second_start = if choice.other_strand_enters_at_first_corner { other } else { other_partner };
        self.orient_strand_from(second_start, &mut incoming, &mut seen);
        for e in self.node_ends() {
            if !seen.contains(&e) {
                self.walk(e, &mut incoming, &mut seen);
            }
        }
        let mut d = self.clone();
        d.orientation = Some(Orientation { incoming });
        Ok(d)
    }

    /// Reverses every strand.
    pub fn reverse_orientation(&self) -> Result<PlanarDiagram, DiagramError> {
        let o = self.orientation.as_ref().ok_or(DiagramError::Unoriented)?;
        let mut d = self.clone();
        d.orientation = Some(self.reversed(o));
        Ok(d)
    }

    fn oriented(&self) -> Result<&Orientation, DiagramError> {
        self.orientation.as_ref().ok_or(DiagramError::Unoriented)
    }

    /// Over-strand and under-strand slot pairs as (entry, exit).
    fn strand_slots(&self, id: usize, o: &Orientation) -> ((u8, u8), (u8, u8)) {
        let c = &self.crossings[id];
        let oriented_pair = |s: u8| {
            if o.is_incoming(End::Crossing { id, slot: s }) {
                (s, s + 2)
            } else {
                (s + 2, s)
            }
        };
        (oriented_pair(c.over), oriented_pair(1 - c.over))
    }

    pub fn crossing_sign(&self, id: usize) -> Result<Sign, DiagramError> {
        let o = self.oriented()?;
        let (over, under) = self.strand_slots(id, o);
        Ok(self.crossings[id].sign_for(over, under))
    }

    /// Second route to the sign: handedness, corrected for each strand that
    /// runs against its reference direction.
    pub fn crossing_sign_by_handedness(&self, id: usize) -> Result<Sign, DiagramError> {
        let o = self.oriented()?;
        let (over, under) = self.strand_slots(id, o);
        let along = |(from, to): (u8, u8)| if from < to { Sign::Positive } else { Sign::Negative };
        Ok(self.crossings[id].handedness() * along(over) * along(under))
    }

    /// `(C+, C-)`.
    pub fn signed_crossing_counts(&self) -> Result<(u64, u64), DiagramError> {
        let mut plus = 0;
        let mut minus = 0;
        for id in 0..self.crossings.len() {
            match self.crossing_sign(id)? {
                Sign::Positive => plus += 1,
                Sign::Negative => minus += 1,
            }
        }
        Ok((plus, minus))
    }

    /// Signed crossing counts restricted to one tangle of an assembled diagram.
    pub fn signed_crossing_counts_in(&self, tangle: usize) -> Result<(u64, u64), DiagramError> {
        self.signed_crossing_counts_where(|site| site.tangle == tangle)
    }

    /// Signed crossing counts over the crossings whose twist row passes `keep`.
    pub fn signed_crossing_counts_where(&self, keep: impl Fn(TwistSite) -> bool) -> Result<(u64, u64), DiagramError> {
        let mut plus = 0;
        let mut minus = 0;
        for (id, c) in self.crossings.iter().enumerate() {
            if !keep(c.site) {
                continue;
            }
            match self.crossing_sign(id)? {
                Sign::Positive => plus += 1,
                Sign::Negative => minus += 1,
            }
        }
        Ok((plus, minus))
    }

    /// Type of an oriented open tangle diagram, read at its corners.
    pub fn classify(&self) -> Result<OrientedTangleType, DiagramError> {
        if !self.open {
            return Err(DiagramError::ClosedDiagram);
        }
        let inward = self.inward_corners()?;
        OrientedTangleType::from_boundary(self.partner_corner(Corner::NW), &inward)
    }

    /// Corners where the orientation enters an open diagram.
    pub fn inward_corners(&self) -> Result<Vec<Corner>, DiagramError> {
        if !self.open {
            return Err(DiagramError::ClosedDiagram);
        }
        let o = self.oriented()?;
        Ok(Corner::ALL
            .into_iter()
            .filter(|&c| !o.is_incoming(End::Corner(c)))
            .collect())
    }

    fn marker_ids(&self, tangle: usize, level: usize) -> Result<HashMap<Corner, usize>, DiagramError> {
        let ids: HashMap<Corner, usize> = self
            .markers
            .iter()
            .enumerate()
            .filter(|(_, m)| m.tangle == tangle && m.level == level)
            .map(|(id, m)| (m.corner, id))
            .collect();
        if ids.len() != 4 {
            return Err(DiagramError::MissingMarkers { tangle, level });
        }
        Ok(ids)
    }

    /// Corners, in the sub-tangle's own frame, where the orientation enters
    /// the sub-tangle marked at `(tangle, level)`.
    pub fn inward_marked(&self, tangle: usize, level: usize) -> Result<Vec<Corner>, DiagramError> {
        let o = self.oriented()?;
        let ids = self.marker_ids(tangle, level)?;
        Ok(Corner::ALL
            .into_iter()
            .filter(|c| o.is_incoming(End::Marker { id: ids[c], outer: true }))
            .collect())
    }

    /// Type of the sub-tangle bounded by the markers at `(tangle, level)`.
    pub fn classify_marked(&self, tangle: usize, level: usize) -> Result<OrientedTangleType, DiagramError> {
        let ids = self.marker_ids(tangle, level)?;
        let inward = self.inward_marked(tangle, level)?;
        // Trace inward from NW until another marker of the same level.
        let mut e = self.mate(End::Marker { id: ids[&Corner::NW], outer: false });
        let partner = loop {
            if let End::Marker { id, outer: false } = e {
                let m = self.markers[id];
                if m.tangle == tangle && m.level == level {
                    break m.corner;
                }
            }
            let out = e.through().expect("sub-tangle strands stay inside");
            e = self.mate(out);
        };
        OrientedTangleType::from_boundary(partner, &inward)
    }

    fn level_count(&self, tangle: usize) -> usize {
        self.markers
            .iter()
            .filter(|m| m.tangle == tangle)
            .map(|m| m.level + 1)
            .max()
            .unwrap_or(0)
    }

    /// Sign shared by every crossing of one twist row.
    pub fn row_sign(&self, site: TwistSite) -> Result<Option<Sign>, DiagramError> {
        let mut sign = None;
        for (id, c) in self.crossings.iter().enumerate() {
            if c.site != site {
                continue;
            }
            let s = self.crossing_sign(id)?;
            match sign {
                None => sign = Some(s),
                Some(prev) if prev != s => {
                    return Err(DiagramError::NonUniformRow {
                        tangle: site.tangle,
                        term: site.term,
                    })
                }
                _ => {}
            }
        }
        Ok(sign)
    }

    /// Types of the tangle and all its nested sub-tangles, plus the sign of
    /// its innermost block, for an oriented diagram built by this module.
    pub fn tangle_types(&self, tangle: usize) -> Result<TangleTypes, DiagramError> {
        let whole = if self.open && !self.markers.iter().any(|m| m.tangle == tangle && m.level == 0) {
            self.classify()?
        } else {
            self.classify_marked(tangle, 0)?
        };
        let depth = self.level_count(tangle).max(1);
        let levels = (1..depth)
            .map(|level| self.classify_marked(tangle, level))
            .collect::<Result<Vec<_>, _>>()?;
        let innermost_term = depth - 1;
        let raw = self
            .row_sign(TwistSite { tangle, term: innermost_term })?
            .ok_or(DiagramError::MissingMarkers { tangle, level: innermost_term })?;
        // One reflection for every level formed after the innermost one.
        let reflections = innermost_term.saturating_sub(1);
        let innermost_sign = if reflections % 2 == 0 { raw } else { raw.flip() };
        Ok(TangleTypes {
            whole,
            levels,
            innermost_sign,
        })
    }

    /// Crossing visits of each component in traversal order, as
    /// `(crossing, entry slot, exit slot)`.
    fn crossing_tours(&self, o: &Orientation) -> Vec<Vec<(usize, u8, u8)>> {
        let mut tours = Vec::new();
        let mut seen = BTreeSet::new();
        for start in self.node_ends() {
            if seen.contains(&start) || !o.is_incoming(start) {
                continue;
            }
            let mut tour = Vec::new();
            let mut e = start;
            loop {
                seen.insert(e);
                let out = e.through().expect("closed diagram");
                seen.insert(out);
                if let (End::Crossing { id, slot }, End::Crossing { slot: exit, .. }) = (e, out) {
                    tour.push((id, slot, exit));
                }
                e = self.mate(out);
                if e == start {
                    break;
                }
            }
            if !tour.is_empty() {
                tours.push(tour);
            }
        }
        tours
    }

    /// PD code `PD[X[i,j,k,l], ...]`: `i` is the incoming under-strand label and
    /// the rest follow clockwise in this module's frame, so that tools using
    /// the usual PD sign rule agree with [`Self::crossing_sign`].
    pub fn export_pd(&self) -> Result<String, DiagramError> {
        if self.open {
            return Err(DiagramError::OpenDiagram);
        }
        let owned;
        let o = match &self.orientation {
            Some(o) => o,
            None => {
                owned = self.orient_closed();
                &owned
            }
        };
        let mut labels: HashMap<(usize, u8), usize> = HashMap::new();
        let mut next = 1;
        for tour in self.crossing_tours(o) {
            let base = next;
            let m = tour.len();
            for (t, &(id, entry, exit)) in tour.iter().enumerate() {
                labels.insert((id, exit), base + t);
                labels.insert((id, entry), base + (t + m - 1) % m);
            }
            next += m;
        }
        let mut out = String::from("PD[");
        for (id, c) in self.crossings.iter().enumerate() {
            let under_in = [1 - c.over, 3 - c.over]
                .into_iter()
                .find(|&s| o.is_incoming(End::Crossing { id, slot: s }))
                .expect("one end of the under strand arrives");
            let mut cw = c.ccw_slots();
            cw.reverse();
            let start = cw.iter().position(|&s| s == under_in).unwrap();
            if id > 0 {
                out.push_str(", ");
            }
            let l: Vec<usize> = (0..4).map(|i| labels[&(id, cw[(start + i) % 4])]).collect();
            write!(out, "X[{},{},{},{}]", l[0], l[1], l[2], l[3]).unwrap();
        }
        out.push(']');
        Ok(out)
    }

    /// Signed Gauss code: `O`/`U` for over/under passes, crossing number
    /// (one-based), and the crossing sign, e.g. `O1+ U2- ...`.
    pub fn export_gauss(&self) -> Result<String, DiagramError> {
        if self.open {
            return Err(DiagramError::OpenDiagram);
        }
        let n = self.count_components()?;
        if n != 1 {
            return Err(DiagramError::MultiComponent(n));
        }
        let oriented = match &self.orientation {
            Some(_) => self.clone(),
            None => self.orient(false)?,
        };
        let o = oriented.oriented()?;
        let mut tokens = Vec::new();
        for tour in oriented.crossing_tours(o) {
            for (id, entry, _) in tour {
                let pass = if self.crossings[id].is_over_slot(entry) { 'O' } else { 'U' };
                let sign = match oriented.crossing_sign(id)? {
                    Sign::Positive => '+',
                    Sign::Negative => '-',
                };
                tokens.push(format!("{pass}{}{sign}", id + 1));
            }
        }
        Ok(tokens.join(" "))
    }
}

/// Component count of a PD code, by joining labels along each strand.
pub fn pd_component_count(text: &str) -> Result<usize, DiagramError> {
    let bad = |m: &str| DiagramError::MalformedPd(m.to_string());
    let body = text
        .trim()
        .strip_prefix("PD[")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| bad("expected PD[...]"))?;
    let mut parent: HashMap<usize, usize> = HashMap::new();
    fn find(parent: &mut HashMap<usize, usize>, x: usize) -> usize {
        let p = *parent.entry(x).or_insert(x);
        if p == x {
            return x;
        }
        let root = find(parent, p);
        parent.insert(x, root);
        root
    }
    for chunk in body.split("X[").skip(1) {
        let inner = chunk.split(']').next().ok_or_else(|| bad("unterminated X"))?;
        let l: Vec<usize> = inner
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| bad(inner)))
            .collect::<Result<_, _>>()?;
        if l.len() != 4 {
            return Err(bad(inner));
        }
        for (a, b) in [(l[0], l[2]), (l[1], l[3])] {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent.insert(ra, rb);
        }
    }
    let keys: Vec<usize> = parent.keys().copied().collect();
    let roots: BTreeSet<usize> = keys.into_iter().map(|k| find(&mut parent, k)).collect();
    Ok(roots.len())
}

/// Oriented types of every tangle of the standard diagram of `expr`.
pub fn subtangle_types(expr: &MontesinosExpression, reverse: bool) -> Result<Vec<TangleTypes>, DiagramError> {
    let d = PlanarDiagram::montesinos(expr).orient(reverse)?;
    (0..expr.len()).map(|i| d.tangle_types(i)).collect()
}
