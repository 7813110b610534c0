//! Exact positive rationals and power bounds.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// A positive rational number in lowest terms.
///
/// Comparison cross-multiplies in `u128`, so any two values with `u64`
/// components compare exactly.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Result<Rational> {
        if num == 0 || den == 0 {
            return Err(domain(format!("{num}/{den} is not a positive rational")));
        }
        let g = gcd(num, den);
        Ok(Rational { num: num / g, den: den / g })
    }

    pub fn integer(n: u64) -> Rational {
        Rational::new(n, 1).expect("positive integer")
    }

    /// `len / period` for a repetition; both positive.
    pub(crate) fn ratio(len: usize, period: usize) -> Rational {
        Rational::new(len as u64, period as u64).expect("positive lengths")
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Accepts `p/q` or a bare integer.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rational> {
        let bad = || Error::Parse(format!("malformed rational {s:?}"));
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
            None => (s.parse().map_err(|_| bad())?, 1),
        };
        Rational::new(num, den).map_err(|_| bad())
    }
}

/// An upper bound on factor exponents.
///
/// With `forbid_equal` set the bound means "β-free": every factor exponent is
/// strictly below β. Without it, "β⁺-free": exponents up to and including β
/// are allowed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PowerBound {
    pub threshold: Rational,
    pub forbid_equal: bool,
}

impl PowerBound {
    /// β-free: forbid exponents ≥ β.
    pub fn free(threshold: Rational) -> PowerBound {
        PowerBound { threshold, forbid_equal: true }
    }

    /// β⁺-free: forbid exponents > β.
    pub fn plus_free(threshold: Rational) -> PowerBound {
        PowerBound { threshold, forbid_equal: false }
    }

    pub fn forbids(&self, exponent: Rational) -> bool {
        match exponent.cmp(&self.threshold) {
            Ordering::Greater => true,
            Ordering::Equal => self.forbid_equal,
            Ordering::Less => false,
        }
    }

    /// Shortest length of a factor with period `period` that the bound forbids.
    pub fn min_violating_length(&self, period: usize) -> usize {
        let scaled = self.threshold.num as u128 * period as u128;
        let den = self.threshold.den as u128;
        let len = if self.forbid_equal { scaled.div_ceil(den) } else { scaled / den + 1 };
        // a factor is never shorter than its period
        (len as usize).max(period)
    }

    /// True when every forbidden repetition has exponent at least 2, which
    /// lets the square-run machinery decide the bound.
    pub(crate) fn needs_only_squares(&self) -> bool {
        self.threshold >= Rational::integer(2)
    }
}

impl fmt::Display for PowerBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.threshold)?;
        if !self.forbid_equal {
            f.write_str("+")?;
        }
        Ok(())
    }
}

/// `p/q` forbids exponent ≥ p/q; `p/q+` forbids exponent > p/q.
impl FromStr for PowerBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<PowerBound> {
        let s = s.trim();
        match s.strip_suffix('+') {
            Some(rest) => Ok(PowerBound::plus_free(rest.parse()?)),
            None => Ok(PowerBound::free(s.parse()?)),
        }
    }
}
