//! Parameters of the power `B = b^n` of the Blaschke factor
//! `b(z) = (z - λ) / (1 - λz)`.
//!
//! `λ` is kept as an exact rational so that the exact engine has an integer
//! representation of every coefficient to fall back on. The two critical
//! ratios `α₀ = (1 - λ)/(1 + λ)` and `α₀⁻¹` mark where the coefficient decay
//! is slowest.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeParams {
    lambda: BigRational,
    n: u64,
    lambda_hp: f64,
}

impl BlaschkeParams {
    /// Validates `0 < λ < 1` and `n ≥ 1`.
    pub fn new(lambda: BigRational, n: u64) -> Result<Self> {
        if !lambda.is_positive() || lambda >= BigRational::one() {
            return Err(Error::Domain(format!("lambda = {lambda} is not in (0, 1)")));
        }
        if n == 0 {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        let lambda_hp = ratio_to_f64(&lambda);
        Ok(Self { lambda, n, lambda_hp })
    }

    /// Convenience constructor from a small fraction `num/den`.
    pub fn from_fraction(num: i64, den: i64, n: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        Self::new(BigRational::new(num.into(), den.into()), n)
    }

    pub fn lambda(&self) -> &BigRational {
        &self.lambda
    }

    /// `λ` rounded to double precision.
    pub fn lambda_f64(&self) -> f64 {
        self.lambda_hp
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Numerator `p` and denominator `q` of `λ = p/q` in lowest terms.
    pub fn lambda_parts(&self) -> (&BigInt, &BigInt) {
        (self.lambda.numer(), self.lambda.denom())
    }

    /// `α₀ = (1 - λ)/(1 + λ)`, exact.
    pub fn alpha0(&self) -> BigRational {
        let one = BigRational::one();
        (&one - &self.lambda) / (&one + &self.lambda)
    }

    /// `α₀⁻¹ = (1 + λ)/(1 - λ)`, exact.
    pub fn alpha0_inv(&self) -> BigRational {
        let one = BigRational::one();
        (&one + &self.lambda) / (&one - &self.lambda)
    }

    pub fn alpha0_f64(&self) -> f64 {
        ratio_to_f64(&self.alpha0())
    }

    pub fn alpha0_inv_f64(&self) -> f64 {
        ratio_to_f64(&self.alpha0_inv())
    }

    /// Same `λ`, different power.
    pub fn with_n(&self, n: u64) -> Result<Self> {
        Self::new(self.lambda.clone(), n)
    }

    /// Default series length `⌈2n/α₀⌉`, past which the tail bound certifies
    /// the omitted mass as negligible.
    pub fn default_kmax(&self) -> usize {
        let v = BigRational::from_integer(BigInt::from(2 * self.n)) * self.alpha0_inv();
        ceil_to_u64(&v) as usize
    }

    /// Position `α₀⁻¹ n` of the right critical coefficient, exact.
    pub fn right_critical(&self) -> BigRational {
        self.alpha0_inv() * BigInt::from(self.n)
    }

    /// Position `α₀ n` of the left critical coefficient, exact.
    pub fn left_critical(&self) -> BigRational {
        self.alpha0() * BigInt::from(self.n)
    }
}

impl fmt::Display for BlaschkeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lambda = {}, n = {}", self.lambda, self.n)
    }
}

/// Parses `"p/q"` or a plain integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Domain(format!("cannot parse '{s}' as a rational p/q"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Nearest double to an exact rational, accurate to a couple of ulps even
/// when numerator and denominator do not fit in a double.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(a), Some(b)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if a.abs() < 9.0e15 && b < 9.0e15 {
            return a / b;
        }
    }
    crate::hp::HpReal::from_ratio(r.numer(), r.denom(), 64).to_f64()
}

/// Sign of the shift in [`floor_shifted`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Shift {
    Down,
    Up,
}

/// Whether the integer `m` satisfies `m ≤ r ± c·n^(num/den)`, decided by
/// comparing integer powers so no root is ever rounded.
fn le_shifted(m: i64, r: &BigRational, c: u64, n: u64, num: u32, den: u32, shift: Shift) -> bool {
    let rhs = BigRational::from_integer(Pow::pow(BigInt::from(c), den) * Pow::pow(BigInt::from(n), num));
    let gap = r - BigRational::from_integer(BigInt::from(m));
    match shift {
        // r - m ≥ c n^(num/den)
        Shift::Down => !gap.is_negative() && Pow::pow(&gap, den) >= rhs,
        // m - r ≤ c n^(num/den)
        Shift::Up => !gap.is_negative() || Pow::pow(-gap, den) <= rhs,
    }
}

/// `⌊r ± c·n^(num/den)⌋`, exact.
pub(crate) fn floor_shifted(r: &BigRational, c: u64, n: u64, num: u32, den: u32, shift: Shift) -> i64 {
    let root = c as f64 * (n as f64).powf(num as f64 / den as f64);
    let approx = ratio_to_f64(r) + if shift == Shift::Up { root } else { -root };
    let mut m = approx.floor() as i64;
    while le_shifted(m + 1, r, c, n, num, den, shift) {
        m += 1;
    }
    while !le_shifted(m, r, c, n, num, den, shift) {
        m -= 1;
    }
    m
}

/// `⌈r ± c·n^(num/den)⌉`, exact.
pub(crate) fn ceil_shifted(r: &BigRational, c: u64, n: u64, num: u32, den: u32, shift: Shift) -> i64 {
    let flipped = match shift {
        Shift::Down => Shift::Up,
        Shift::Up => Shift::Down,
    };
    -floor_shifted(&-r, c, n, num, den, flipped)
}

pub(crate) fn ceil_to_u64(r: &BigRational) -> u64 {
    r.ceil().to_integer().to_u64().expect("value fits in u64")
}
