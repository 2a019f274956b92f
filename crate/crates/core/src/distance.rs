//! Exact rationals and extended (possibly infinite) distances.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};

/// Exact rational scalar used for every metric value and constant.
pub type Rational = num_rational::Rational64;

/// A distance value: a nonnegative exact rational, or infinity for pairs that a
/// truncated search could not connect.
///
/// `Finite` orders before `Infinite`, so the derived ordering is the usual one
/// on the extended half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(Rational),
    Infinite,
}

impl Distance {
    pub const ZERO: Distance = Distance::Finite(Rational::new_raw(0, 1));

    pub fn from_int(v: i64) -> Self {
        Distance::Finite(Rational::from_integer(v))
    }

    pub fn finite(self) -> Option<Rational> {
        match self {
            Distance::Finite(r) => Some(r),
            Distance::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Distance::Finite(r) if r.is_zero())
    }

    /// Multiplies a finite distance by a nonnegative scalar; `0 * inf` is `0`.
    pub fn scale(self, factor: Rational) -> Distance {
        match self {
            Distance::Finite(r) => Distance::Finite(r * factor),
            Distance::Infinite if factor.is_zero() => Distance::ZERO,
            Distance::Infinite => Distance::Infinite,
        }
    }
}

impl Add for Distance {
    type Output = Distance;

    fn add(self, rhs: Distance) -> Distance {
        match (self, rhs) {
            (Distance::Finite(a), Distance::Finite(b)) => Distance::Finite(a + b),
            _ => Distance::Infinite,
        }
    }
}

impl From<Rational> for Distance {
    fn from(r: Rational) -> Self {
        Distance::Finite(r)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(r) => write!(f, "{}", format_rational(r)),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Distance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(Distance::Infinite);
        }
        parse_rational(s).map(Distance::Finite)
    }
}

/// Formats a rational as `p` or `p/q` in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `1.5` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Domain(format!("not a rational number: `{s}`"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(Error::Domain(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let denom = 10i64.pow(frac.len() as u32);
        let digits: i64 = frac.parse().map_err(|_| bad())?;
        let mut value = Rational::from_integer(whole.abs()) + Rational::new(digits, denom);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    s.parse::<i64>().map(Rational::from_integer).map_err(|_| bad())
}

/// `2^n` as an exact rational, for any integer `n`.
pub fn pow2(n: i32) -> Rational {
    if n >= 0 {
        Rational::from_integer(1i64 << n)
    } else {
        Rational::new(1, 1i64 << (-n))
    }
}
