//! Exact rational scores.
//!
//! Every rule in this crate sums unit fractions (1/|A_i|, 1/j, 1/(1+|W∩A_i|)),
//! and tie detection drives winner selection, so scores are kept as exact
//! rationals in canonical reduced form. No floating point is used anywhere in
//! scoring.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Sub, SubAssign};
use std::str::FromStr;

/// An exact rational score value.
///
/// Internally a reduced fraction with a positive denominator. Ordering and
/// equality are exact, so `1/2 + 1/3 + 1/6 == 1` holds without tolerance.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Score(BigRational);

impl Score {
    pub fn zero() -> Self {
        Score(BigRational::zero())
    }

    pub fn one() -> Self {
        Score(BigRational::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Score(BigRational::from_integer(n.into()))
    }

    /// Builds `numer/denom`. Fails on a zero denominator; the sign is
    /// normalised onto the numerator.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ScoreError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(ScoreError::ZeroDenominator);
        }
        Ok(Score(BigRational::new(numer.into(), denom)))
    }

    /// The unit fraction `1/n`.
    pub fn reciprocal_of(n: u64) -> Self {
        assert!(n > 0, "reciprocal of zero");
        Score(BigRational::new(BigInt::one(), BigInt::from(n)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Renders the score as `numer/denom` with the denominator always
    /// written out, e.g. `5/1` or `7/2`. This is the wire form used in
    /// result documents.
    pub fn fraction_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Display for Score {
    /// Human form: integers print without a denominator, everything else as
    /// `numer/denom`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Score({})", self)
    }
}

impl From<u32> for Score {
    fn from(n: u32) -> Self {
        Score::from_integer(n)
    }
}

impl From<u64> for Score {
    fn from(n: u64) -> Self {
        Score::from_integer(n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScoreError {
    #[error("denominator must be non-zero")]
    ZeroDenominator,
    #[error("cannot parse {0:?} as a rational score")]
    Parse(String),
}

impl FromStr for Score {
    type Err = ScoreError;

    /// Parses `p/q` or a plain integer.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ScoreError::Parse(s.to_string());
        match s.split_once('/') {
            Some((num, den)) => {
                let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
                let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(ScoreError::ZeroDenominator);
                }
                Ok(Score(BigRational::new(num, den)))
            }
            None => {
                let num = BigInt::from_str(s).map_err(|_| bad())?;
                Ok(Score(BigRational::from_integer(num)))
            }
        }
    }
}

impl Add for Score {
    type Output = Score;
    fn add(self, rhs: Score) -> Score {
        Score(self.0 + rhs.0)
    }
}

impl Add<&Score> for Score {
    type Output = Score;
    fn add(self, rhs: &Score) -> Score {
        Score(self.0 + &rhs.0)
    }
}

impl AddAssign for Score {
    fn add_assign(&mut self, rhs: Score) {
        self.0 += rhs.0;
    }
}

impl AddAssign<&Score> for Score {
    fn add_assign(&mut self, rhs: &Score) {
        self.0 += &rhs.0;
    }
}

impl Sub for Score {
    type Output = Score;
    fn sub(self, rhs: Score) -> Score {
        Score(self.0 - rhs.0)
    }
}

impl Sub<&Score> for Score {
    type Output = Score;
    fn sub(self, rhs: &Score) -> Score {
        Score(self.0 - &rhs.0)
    }
}

impl SubAssign for Score {
    fn sub_assign(&mut self, rhs: Score) {
        self.0 -= rhs.0;
    }
}

impl Mul for Score {
    type Output = Score;
    fn mul(self, rhs: Score) -> Score {
        Score(self.0 * rhs.0)
    }
}

impl Mul<&Score> for Score {
    type Output = Score;
    fn mul(self, rhs: &Score) -> Score {
        Score(self.0 * &rhs.0)
    }
}

/// Panics if `rhs` is zero.
impl Div for Score {
    type Output = Score;
    fn div(self, rhs: Score) -> Score {
        Score(self.0 / rhs.0)
    }
}

/// Panics if `rhs` is zero.
impl Div<&Score> for Score {
    type Output = Score;
    fn div(self, rhs: &Score) -> Score {
        Score(self.0 / &rhs.0)
    }
}

impl Sum for Score {
    fn sum<I: Iterator<Item = Score>>(iter: I) -> Score {
        iter.fold(Score::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Score> for Score {
    fn sum<I: Iterator<Item = &'a Score>>(iter: I) -> Score {
        iter.fold(Score::zero(), |acc, x| acc + x)
    }
}
