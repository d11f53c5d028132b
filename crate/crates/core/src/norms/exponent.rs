use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// An exponent `p ∈ [1, ∞]`, kept rational so that derived quantities such
/// as predicted slopes stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Ratio<i64>),
    Infinity,
}

impl Exponent {
    pub fn new(p: Ratio<i64>) -> Result<Self> {
        if p < Ratio::one() {
            return Err(Error::Domain(format!("exponent {p} is below 1")));
        }
        Ok(Exponent::Finite(p))
    }

    pub fn integer(p: i64) -> Result<Self> {
        Self::new(Ratio::from_integer(p))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Exponent::Finite(r) => r.to_f64().expect("small ratio"),
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// Hölder conjugate `p/(p-1)`.
    pub fn conjugate(&self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(Ratio::one()),
            Exponent::Finite(r) if r.is_one() => Exponent::Infinity,
            Exponent::Finite(r) => Exponent::Finite(r / (r - Ratio::one())),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts `inf`, integers, fractions `a/b` and decimals such as `3.5`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Domain(format!("cannot parse exponent '{s}'"));
        if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinity);
        }
        let r = if let Some((a, b)) = t.split_once('/') {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ratio::new(a, b)
        } else if let Some((int, frac)) = t.split_once('.') {
            if frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let scale = 10i64.pow(frac.len() as u32);
            let whole: i64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let part: i64 = if frac.is_empty() {
                0
            } else {
                frac.parse().map_err(|_| bad())?
            };
            Ratio::new(whole * scale + part, scale)
        } else {
            Ratio::from_integer(t.parse().map_err(|_| bad())?)
        };
        Exponent::new(r)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(r) => write!(f, "{r}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}
