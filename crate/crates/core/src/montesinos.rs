//! Montesinos expressions `M(P1/Q1, ..., PN/QN)`: validation, the knot
//! condition, tangle-rotation moves and restricted forms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{ContinuedFraction, ExtendedFraction, Fraction, RationalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpressionError {
    #[error("too few tangles: found {found}, need at least 3")]
    TooFewTangles { found: usize },
    #[error("tangle {index} is the integer {value}")]
    IntegralTangle { index: usize, value: i64 },
    #[error("tangle {index} is the infinite tangle 1/0")]
    InfiniteTangle { index: usize },
    #[error("move index {index} out of range for {len} tangles")]
    MoveOutOfRange { index: usize, len: usize },
}

/// Position-tagged failure of [`parse_expression`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] ExpressionError),
}

/// A validated expression: at least three finite, non-integral tangles.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MontesinosExpression {
    tangles: Vec<Fraction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KnotCase {
    /// Exactly one even denominator.
    A,
    /// All denominators odd and an odd number of odd numerators.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KnotCondition {
    Knot(KnotCase),
    Link,
}

impl KnotCondition {
    pub fn is_knot(self) -> bool {
        matches!(self, KnotCondition::Knot(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Tangle `i` gains `+1`, tangle `i + 1` gains `-1`.
    Forward,
    /// Tangle `i` gains `-1`, tangle `i + 1` gains `+1`.
    Backward,
}

impl Direction {
    fn delta(self) -> i64 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }
}

/// One rotation of a tangle: transfers an integer between neighbours `index`
/// and `index + 1` (zero-based, no wrap-around).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RotationMove {
    pub index: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RestrictedKind {
    AllPositive,
    AllNegative,
    /// Both signs present, every `|P_i/Q_i| < 1`.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RestrictedForm {
    pub kind: RestrictedKind,
    pub expression: MontesinosExpression,
}

impl MontesinosExpression {
    pub fn validate<I, T>(tangles: I) -> Result<MontesinosExpression, ExpressionError>
    where
        I: IntoIterator<Item = T>,
        T: Into<ExtendedFraction>,
    {
        let mut out = Vec::new();
        for (index, t) in tangles.into_iter().enumerate() {
            match t.into() {
                ExtendedFraction::Infinity => return Err(ExpressionError::InfiniteTangle { index }),
                ExtendedFraction::Finite(f) if f.is_integer() => {
                    return Err(ExpressionError::IntegralTangle {
                        index,
                        value: f.num(),
                    })
                }
                ExtendedFraction::Finite(f) => out.push(f),
            }
        }
        if out.len() < 3 {
            return Err(ExpressionError::TooFewTangles { found: out.len() });
        }
        Ok(MontesinosExpression { tangles: out })
    }

    pub fn tangles(&self) -> &[Fraction] {
        &self.tangles
    }

    pub fn len(&self) -> usize {
        self.tangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tangles.is_empty()
    }

    pub fn sum(&self) -> Fraction {
        self.tangles.iter().copied().sum()
    }

    pub fn continued_fractions(&self) -> Vec<ContinuedFraction> {
        self.tangles.iter().map(|&f| ContinuedFraction::standard(f)).collect()
    }

    /// Crossings of the standard diagram, `sum_i sum_j |a_ij|`.
    pub fn standard_crossing_count(&self) -> u64 {
        self.continued_fractions().iter().map(ContinuedFraction::crossing_count).sum()
    }

    pub fn knot_condition(&self) -> KnotCondition {
        let even_dens = self.tangles.iter().filter(|f| f.den() % 2 == 0).count();
        let odd_nums = self.tangles.iter().filter(|f| f.num() % 2 != 0).count();
        match even_dens {
            1 => KnotCondition::Knot(KnotCase::A),
            0 if odd_nums % 2 == 1 => KnotCondition::Knot(KnotCase::B),
            _ => KnotCondition::Link,
        }
    }

    pub fn is_knot(&self) -> bool {
        self.knot_condition().is_knot()
    }

    pub fn mirror(&self) -> MontesinosExpression {
        MontesinosExpression {
            tangles: self.tangles.iter().map(|&f| -f).collect(),
        }
    }

    pub fn rotation_move(&self, mv: RotationMove) -> Result<MontesinosExpression, ExpressionError> {
        let len = self.tangles.len();
        if mv.index + 1 >= len {
            return Err(ExpressionError::MoveOutOfRange {
                index: mv.index,
                len,
            });
        }
        let d = Fraction::integer(mv.direction.delta());
        let mut tangles = self.tangles.clone();
        tangles[mv.index] = tangles[mv.index] + d;
        tangles[mv.index + 1] = tangles[mv.index + 1] - d;
        MontesinosExpression::validate(tangles)
    }

    /// Which restricted case the expression is already in, if any.
    pub fn restricted_kind(&self) -> Option<RestrictedKind> {
        if self.tangles.iter().all(|f| f.is_positive()) {
            Some(RestrictedKind::AllPositive)
        } else if self.tangles.iter().all(|f| f.is_negative()) {
            Some(RestrictedKind::AllNegative)
        } else if self.tangles.iter().all(|f| f.abs() < Fraction::ONE) {
            Some(RestrictedKind::Mixed)
        } else {
            None
        }
    }

    /// Integer parts of the restricted form, tangle by tangle.
    fn restricted_floors(&self) -> Vec<i64> {
        let n = self.tangles.len() as i64;
        let e: i64 = self.tangles.iter().map(|f| f.floor()).sum();
        let mut floors = vec![0i64; self.tangles.len()];
        if e >= 0 {
            *floors.last_mut().unwrap() = e;
        } else if e > -n {
            let start = (n + e) as usize;
            for fl in &mut floors[start..] {
                *fl = -1;
            }
        } else {
            for fl in floors.iter_mut() {
                *fl = -1;
            }
            *floors.last_mut().unwrap() += e + n;
        }
        floors
    }

    /// Normalizes to a restricted expression. The integer surplus always goes
    /// to the last tangle; fractional parts and the total sum are unchanged.
    pub fn to_restricted(&self) -> RestrictedForm {
        let tangles: Vec<Fraction> = self
            .tangles
            .iter()
            .zip(self.restricted_floors())
            .map(|(f, fl)| f.fractional_part() + Fraction::integer(fl))
            .collect();
        let expression = MontesinosExpression::validate(tangles)
            .expect("fractional parts are non-integral");
        let kind = expression
            .restricted_kind()
            .expect("normalization lands in a restricted case");
        RestrictedForm { kind, expression }
    }

    /// A rotation-move sequence taking `self` to [`Self::to_restricted`].
    pub fn restriction_moves(&self) -> Vec<RotationMove> {
        let mut moves = Vec::new();
        let mut carried = 0i64;
        let targets = self.restricted_floors();
        for i in 0..self.tangles.len() - 1 {
            carried += targets[i] - self.tangles[i].floor();
            let direction = if carried > 0 {
                Direction::Forward
            } else {
                Direction::Backward
            };
            for _ in 0..carried.unsigned_abs() {
                moves.push(RotationMove { index: i, direction });
            }
        }
        moves
    }
}

impl fmt::Display for MontesinosExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tangles.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MontesinosExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({self})")
    }
}

impl From<MontesinosExpression> for String {
    fn from(e: MontesinosExpression) -> String {
        e.to_string()
    }
}

impl TryFrom<String> for MontesinosExpression {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Self, ParseError> {
        parse_expression(&s)
    }
}

impl FromStr for MontesinosExpression {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_expression(s)
    }
}

/// Parses `F(,F)*` with `F = ['-'] digits ['/' digits]`, ignoring whitespace.
pub fn parse_expression(text: &str) -> Result<MontesinosExpression, ParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut tangles = Vec::new();

    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let syntax = |offset: usize, message: &str| ParseError::Syntax {
        offset,
        message: message.to_string(),
    };
    let digits = |pos: &mut usize| -> Result<i64, ParseError> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return Err(syntax(start, "expected digits"));
        }
        text[start..*pos]
            .parse()
            .map_err(|_| syntax(start, "integer out of range"))
    };

    loop {
        skip_ws(&mut pos);
        let start = pos;
        let negative = bytes.get(pos) == Some(&b'-');
        if negative {
            pos += 1;
            skip_ws(&mut pos);
        }
        let num = digits(&mut pos)?;
        skip_ws(&mut pos);
        let den = if bytes.get(pos) == Some(&b'/') {
            pos += 1;
            skip_ws(&mut pos);
            digits(&mut pos)?
        } else {
            1
        };
        let num = if negative { -num } else { num };
        let value = match Fraction::new(num, den) {
            Ok(f) => ExtendedFraction::Finite(f),
            Err(RationalError::ZeroDenominator) if num != 0 => ExtendedFraction::Infinity,
            Err(_) => return Err(syntax(start, "0/0 is not a fraction")),
        };
        tangles.push(value);
        skip_ws(&mut pos);
        match bytes.get(pos) {
            None => break,
            Some(b',') => pos += 1,
            Some(_) => return Err(syntax(pos, "expected ',' or end of input")),
        }
    }
    Ok(MontesinosExpression::validate(tangles)?)
}
