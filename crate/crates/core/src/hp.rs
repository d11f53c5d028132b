//! Arbitrary precision binary floating point: `mantissa · 2^exponent`.
//!
//! Addition, subtraction and multiplication are exact; rounding only happens
//! in [`HpReal::from_ratio`], [`HpReal::div_round`] and [`HpReal::round_to`],
//! each of which rounds to nearest with a relative error of at most
//! `2^-bits`. Callers that track error bounds count those roundings.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub struct HpReal {
    mantissa: BigInt,
    exponent: i64,
}

impl HpReal {
    pub fn zero() -> Self {
        Self {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn from_int(i: impl Into<BigInt>) -> Self {
        Self {
            mantissa: i.into(),
            exponent: 0,
        }
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "HpReal::from_f64 on {x}");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Self {
            mantissa: BigInt::from(m) * sign,
            exponent: e,
        }
    }

    /// `num / den` rounded to nearest with `bits` significant bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u64) -> Self {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Self::zero();
        }
        let negative = num.is_negative() != den.is_negative();
        let a = num.abs();
        let b = den.abs();
        // choose shift so that the quotient carries at least bits + 1 bits
        let shift = bits as i64 + 1 - (a.bits() as i64 - b.bits() as i64);
        let (q, r, divisor) = if shift >= 0 {
            let (q, r) = (a << shift as u64).div_rem(&b);
            (q, r, b)
        } else {
            let d = b << (-shift) as u64;
            let (q, r) = a.div_rem(&d);
            (q, r, d)
        };
        let q = match (r << 1u32).cmp(&divisor) {
            Ordering::Greater => q + 1u32,
            Ordering::Equal if q.is_odd() => q + 1u32,
            _ => q,
        };
        let mantissa = if negative { -q } else { q };
        Self {
            mantissa,
            exponent: -shift,
        }
        .normalized()
    }

    /// Divides by a nonzero integer, rounding the quotient to `bits` bits.
    pub fn div_round(&self, den: &BigInt, bits: u64) -> Self {
        if self.mantissa.is_zero() {
            return Self::zero();
        }
        let q = Self::from_ratio(&self.mantissa, den, bits);
        Self {
            mantissa: q.mantissa,
            exponent: q.exponent + self.exponent,
        }
    }

    /// Rounds to nearest with `bits` significant bits.
    pub fn round_to(&self, bits: u64) -> Self {
        let len = self.mantissa.bits();
        if len <= bits {
            return self.clone();
        }
        let drop = len - bits;
        let mag = self.mantissa.abs();
        let q = &mag >> drop;
        let rest = &mag - (&q << drop);
        let half = BigInt::from(1u8) << (drop - 1);
        // ties to even, as in IEEE arithmetic
        let q = match rest.cmp(&half) {
            Ordering::Greater => q + 1u32,
            Ordering::Equal if q.is_odd() => q + 1u32,
            _ => q,
        };
        let mantissa = if self.mantissa.is_negative() { -q } else { q };
        Self {
            mantissa,
            exponent: self.exponent + drop as i64,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return self;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mantissa >>= tz;
            self.exponent += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Number of significant bits held in the mantissa.
    pub fn precision(&self) -> u64 {
        self.mantissa.bits()
    }

    pub fn mul_int(&self, m: &BigInt) -> Self {
        Self {
            mantissa: &self.mantissa * m,
            exponent: self.exponent,
        }
        .normalized()
    }

    /// Multiplies by `2^e`.
    pub fn ldexp(&self, e: i64) -> Self {
        Self {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + e,
        }
    }

    /// `log2 |x|`, `-inf` for zero. Never over- or underflows.
    pub fn log2_abs(&self) -> f64 {
        if self.mantissa.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (top, e) = self.top_bits();
        (top as f64).log2() + e as f64
    }

    /// Nearest double (subnormal or zero on underflow, infinite on overflow).
    pub fn to_f64(&self) -> f64 {
        if self.mantissa.is_zero() {
            return 0.0;
        }
        let (top, e) = self.top_bits();
        let v = ldexp(top as f64, e);
        if self.mantissa.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Top 64 bits of |mantissa| (lowest bit sticky) and matching exponent.
    fn top_bits(&self) -> (u64, i64) {
        let mag = self.mantissa.magnitude();
        let len = mag.bits();
        if len <= 64 {
            (mag.to_u64().unwrap(), self.exponent)
        } else {
            let drop = len - 64;
            let top = (mag >> drop).to_u64().unwrap();
            let sticky = mag.trailing_zeros().is_some_and(|tz| tz < drop);
            (top | sticky as u64, self.exponent + drop as i64)
        }
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, i64) {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        (a, b, e)
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.abs().cmp(&other.abs())
    }
}

/// `x · 2^e` without intermediate overflow or premature underflow.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    let big = f64::from_bits(((1023 + 1000) as u64) << 52);
    let small = f64::from_bits(((1023 - 1000) as u64) << 52);
    while e > 1000 {
        x *= big;
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= small;
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * f64::from_bits(((1023 + e) as u64) << 52)
}

impl PartialEq for HpReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HpReal {}

impl PartialOrd for HpReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HpReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mantissa.sign(), other.mantissa.sign()) {
            (a, b) if a != b => sign_rank(a).cmp(&sign_rank(b)),
            _ => {
                let (a, b, _) = self.aligned(other);
                a.cmp(&b)
            }
        }
    }
}

fn sign_rank(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl Add for &HpReal {
    type Output = HpReal;
    fn add(self, rhs: &HpReal) -> HpReal {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.aligned(rhs);
        HpReal {
            mantissa: a + b,
            exponent: e,
        }
        .normalized()
    }
}

impl Sub for &HpReal {
    type Output = HpReal;
    fn sub(self, rhs: &HpReal) -> HpReal {
        self + &(-rhs)
    }
}

impl Mul for &HpReal {
    type Output = HpReal;
    fn mul(self, rhs: &HpReal) -> HpReal {
        HpReal {
            mantissa: &self.mantissa * &rhs.mantissa,
            exponent: self.exponent + rhs.exponent,
        }
        .normalized()
    }
}

impl Neg for &HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        HpReal {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Sub for HpReal {
    type Output = HpReal;
    fn sub(self, rhs: HpReal) -> HpReal {
        &self - &rhs
    }
}

impl Add for HpReal {
    type Output = HpReal;
    fn add(self, rhs: HpReal) -> HpReal {
        &self + &rhs
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_f64();
        if v != 0.0 && v.is_finite() || self.is_zero() {
            write!(f, "{v:e}")
        } else {
            let sign = if self.is_negative() { "-" } else { "" };
            write!(f, "{sign}2^{:.6}", self.log2_abs())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f64_round_trip_is_exact() {
        for x in [0.0, 1.0, -0.75, 1e-300, 5e-324, 1.7e308, std::f64::consts::PI] {
            assert_eq!(HpReal::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn ratio_rounds_to_nearest() {
        let third = HpReal::from_ratio(&1.into(), &3.into(), 80);
        assert_eq!(third.to_f64(), 1.0 / 3.0);
        let r = HpReal::from_ratio(&(-3).into(), &16.into(), 10);
        assert_eq!(r.to_f64(), -0.1875);
    }

    #[test]
    fn tiny_values_keep_their_logarithm() {
        let x = HpReal::from_int(1).ldexp(-5000);
        assert_eq!(x.to_f64(), 0.0);
        assert_eq!(x.log2_abs(), -5000.0);
        let y = HpReal::from_ratio(&1.into(), &(BigInt::from(3) << 4000u32), 64);
        assert!((y.log2_abs() + 4000.0 + 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn ldexp_crosses_the_subnormal_boundary() {
        assert_eq!(ldexp(1.0, -1074), 5e-324);
        assert_eq!(ldexp(1.0, 1023), 2f64.powi(1023));
        assert_eq!(ldexp(1.0, 1024), f64::INFINITY);
        assert_eq!(ldexp(3.0, -1080), 0.0);
    }

    #[test]
    fn ordering_handles_signs_and_scales() {
        let a = HpReal::from_f64(-2.0);
        let b = HpReal::from_f64(1e-200);
        let c = HpReal::from_f64(3.0);
        assert!(a < b && b < c);
        assert_eq!(HpReal::from_f64(0.5), HpReal::from_ratio(&2.into(), &4.into(), 8));
    }

    proptest! {
        #[test]
        fn add_and_mul_are_exact(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            let (x, y) = (HpReal::from_f64(a), HpReal::from_f64(b));
            let s = &x + &y;
            let p = &x * &y;
            // exact sum/product rounded once must equal the correctly rounded double
            prop_assert_eq!(s.round_to(53).to_f64(), a + b);
            prop_assert_eq!(p.round_to(53).to_f64(), a * b);
            prop_assert_eq!(&s - &y, x);
        }

        #[test]
        fn ratio_relative_error_is_bounded(n in 1i64..1_000_000_000, d in 1i64..1_000_000_000, bits in 8u64..200) {
            let r = HpReal::from_ratio(&n.into(), &d.into(), bits);
            // |r - n/d| · d ≤ 2^-bits · n  ⇔  |r·d - n| ≤ 2^-bits · n
            let err = (&r * &HpReal::from_int(d)) - HpReal::from_int(n);
            prop_assert!(err.abs().log2_abs() <= (n as f64).log2() - bits as f64 + 1e-9);
        }
    }
}
