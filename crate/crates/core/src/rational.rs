//! Exact rationals, standard continued fractions and Farey parents.
//!
//! Every tangle parameter, edgepath vertex and coordinate in this crate is a
//! [`Fraction`]. Values stay small in practice, so the representation is a
//! reduced `i64` pair with `i128` intermediates; arithmetic panics on `i64`
//! overflow rather than silently wrapping.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("the improper value 1/0 has no continued fraction")]
    Infinite,
    #[error("integer {0} has no Farey parent pair")]
    IntegerHasNoParents(i64),
    #[error("continued fraction has no terms")]
    EmptyContinuedFraction,
    #[error("division by zero while evaluating continued fraction {0:?}")]
    DegenerateTower(Vec<i64>),
    #[error("malformed fraction {0:?}")]
    Syntax(String),
}

/// An irreducible fraction `num/den` with `den >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Fraction {
    num: i64,
    den: i64,
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("fraction component overflows i64")
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Fraction, RationalError> {
        if den == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Self::reduce(num as i128, den as i128))
    }

    pub fn integer(z: i64) -> Fraction {
        Fraction { num: z, den: 1 }
    }

    fn reduce(num: i128, den: i128) -> Fraction {
        debug_assert!(den != 0);
        let g = num.gcd(&den);
        let sign = if den < 0 { -1 } else { 1 };
        Fraction {
            num: narrow(sign * num / g),
            den: narrow(sign * den / g),
        }
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    pub fn is_positive(self) -> bool {
        self.num > 0
    }

    pub fn is_negative(self) -> bool {
        self.num < 0
    }

    pub fn signum(self) -> i64 {
        self.num.signum()
    }

    pub fn abs(self) -> Fraction {
        Fraction {
            num: self.num.abs(),
            den: self.den,
        }
    }

    pub fn floor(self) -> i64 {
        Integer::div_floor(&self.num, &self.den)
    }

    pub fn ceil(self) -> i64 {
        -Integer::div_floor(&-self.num, &self.den)
    }

    /// The part in `[0, 1)` left after removing [`Fraction::floor`].
    pub fn fractional_part(self) -> Fraction {
        self - Fraction::integer(self.floor())
    }

    pub fn recip(self) -> Result<Fraction, RationalError> {
        Fraction::new(self.den, self.num).map_err(|_| RationalError::ZeroDenominator)
    }

    /// `|p s - q r| = 1`: the two fractions span an edge of the Farey graph.
    pub fn is_farey_adjacent(self, other: Fraction) -> bool {
        let det = self.num as i128 * other.den as i128 - self.den as i128 * other.num as i128;
        det.abs() == 1
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Fraction {
    fn from(z: i64) -> Fraction {
        Fraction::integer(z)
    }
}

impl From<Fraction> for String {
    fn from(f: Fraction) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for Fraction {
    type Error = RationalError;

    fn try_from(s: String) -> Result<Fraction, RationalError> {
        s.parse()
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Fraction) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Fraction) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl Add for Fraction {
    type Output = Fraction;

    fn add(self, rhs: Fraction) -> Fraction {
        Fraction::reduce(
            self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Sub for Fraction {
    type Output = Fraction;

    fn sub(self, rhs: Fraction) -> Fraction {
        self + (-rhs)
    }
}

impl Neg for Fraction {
    type Output = Fraction;

    fn neg(self) -> Fraction {
        Fraction {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Mul for Fraction {
    type Output = Fraction;

    fn mul(self, rhs: Fraction) -> Fraction {
        Fraction::reduce(
            self.num as i128 * rhs.num as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl std::iter::Sum for Fraction {
    fn sum<I: Iterator<Item = Fraction>>(iter: I) -> Fraction {
        iter.fold(Fraction::ZERO, Add::add)
    }
}

/// A rational number or the improper value `1/0`.
///
/// `1/0` only ever shows up as a parsed tangle (to be rejected) or as the
/// vertex `<1/0>` of the edgepath diagram; it never takes part in arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ExtendedFraction {
    Finite(Fraction),
    Infinity,
}

impl From<Fraction> for ExtendedFraction {
    fn from(f: Fraction) -> Self {
        ExtendedFraction::Finite(f)
    }
}

impl fmt::Display for ExtendedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedFraction::Finite(x) => write!(f, "{x}"),
            ExtendedFraction::Infinity => write!(f, "1/0"),
        }
    }
}

/// Parses `P`, `P/Q`, `-P/Q` (whitespace around tokens allowed).
fn parse_parts(s: &str) -> Result<(i64, i64), RationalError> {
    let bad = || RationalError::Syntax(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s.trim(), None),
    };
    let num: i64 = n.parse().map_err(|_| bad())?;
    let den: i64 = match d {
        Some(d) if d.starts_with(['-', '+']) => return Err(bad()),
        Some(d) => d.parse().map_err(|_| bad())?,
        None => 1,
    };
    Ok((num, den))
}

impl FromStr for Fraction {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Fraction, RationalError> {
        let (num, den) = parse_parts(s)?;
        Fraction::new(num, den)
    }
}

impl FromStr for ExtendedFraction {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<ExtendedFraction, RationalError> {
        match parse_parts(s)? {
            (0, 0) => Err(RationalError::Syntax(s.to_string())),
            (_, 0) => Ok(ExtendedFraction::Infinity),
            (num, den) => Ok(ExtendedFraction::Finite(Fraction::new(num, den)?)),
        }
    }
}

/// A tower `a1 + 1/(a2 + 1/(... + 1/ak))`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContinuedFraction {
    terms: Vec<i64>,
}

impl ContinuedFraction {
    /// Wraps raw terms without checking the standard-form sign rules.
    pub fn from_terms(terms: Vec<i64>) -> Result<ContinuedFraction, RationalError> {
        if terms.is_empty() {
            return Err(RationalError::EmptyContinuedFraction);
        }
        Ok(ContinuedFraction { terms })
    }

    /// The standard expansion: for positive values `a1 >= 0`, middle terms
    /// `>= 1`, last term `>= 2`; mirrored signs for negative values. Integers
    /// get the length-one expansion `[z]`.
    pub fn standard(f: Fraction) -> ContinuedFraction {
        if f.is_negative() {
            let positive = ContinuedFraction::standard(-f);
            return ContinuedFraction {
                terms: positive.terms.iter().map(|a| -a).collect(),
            };
        }
        let (mut p, mut q) = (f.num, f.den);
        let mut terms = Vec::new();
        loop {
            let (a, r) = p.div_rem(&q);
            terms.push(a);
            if r == 0 {
                break;
            }
            p = q;
            q = r;
        }
        ContinuedFraction { terms }
    }

    pub fn standard_extended(f: ExtendedFraction) -> Result<ContinuedFraction, RationalError> {
        match f {
            ExtendedFraction::Finite(f) => Ok(ContinuedFraction::standard(f)),
            ExtendedFraction::Infinity => Err(RationalError::Infinite),
        }
    }

    pub fn terms(&self) -> &[i64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of `|a_i|`: the crossing count of the standard tangle diagram.
    pub fn crossing_count(&self) -> u64 {
        self.terms.iter().map(|a| a.unsigned_abs()).sum()
    }

    /// Checks the sign and length rules of a standard expansion.
    pub fn is_standard(&self) -> bool {
        let k = self.terms.len();
        if k == 1 {
            return true;
        }
        let positive = self.terms[1] > 0;
        let s = if positive { 1 } else { -1 };
        let t: Vec<i64> = self.terms.iter().map(|a| a * s).collect();
        t[0] >= 0 && t[1..k - 1].iter().all(|&a| a >= 1) && t[k - 1] >= 2
    }

    /// Evaluates the tower from the innermost term outward.
    pub fn evaluate(&self) -> Result<Fraction, RationalError> {
        let degenerate = || RationalError::DegenerateTower(self.terms.clone());
        let (&last, rest) = self
            .terms
            .split_last()
            .ok_or(RationalError::EmptyContinuedFraction)?;
        let mut value = Fraction::integer(last);
        for &a in rest.iter().rev() {
            value = Fraction::integer(a) + value.recip().map_err(|_| degenerate())?;
        }
        Ok(value)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// The two Farey neighbours of `f` with smaller denominator, `(smaller, larger)`.
/// `f` is their mediant.
pub fn farey_parents(f: Fraction) -> Result<(Fraction, Fraction), RationalError> {
    if f.is_integer() {
        return Err(RationalError::IntegerHasNoParents(f.num));
    }
    let (p, q) = (f.num as i128, f.den as i128);
    // s = p^{-1} mod q gives p*s - q*r = 1, i.e. r/s just below p/q.
    let inverse = p.mod_floor(&q).extended_gcd(&q).x.mod_floor(&q);
    let s = inverse;
    let r = (p * s - 1) / q;
    let smaller = Fraction::reduce(r, s);
    let larger = Fraction::reduce(p - r, q - s);
    Ok((smaller, larger))
}
