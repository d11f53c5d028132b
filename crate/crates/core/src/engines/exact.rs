//! Exact engine.
//!
//! With `λ = p/q` every coefficient is `B̂(k) = E_k / q^(n+k)` for an integer
//! `E_k`, the binomial convolution of `(z - λ)^n` with `(1 - λz)^-n`:
//!
//! ```text
//! E_k = Σ_{j=0}^{min(n,k)} (-1)^(n-j) C(n,j) C(n-1+k-j, n-1) p^(n+k-2j) q^(2j)
//! ```
//!
//! Single coefficients are summed term by term; whole series use the
//! three-term recurrence that follows from `(z-λ)(1-λz) B' = n(1-λ²) B`,
//! which is exact in integers. When the integers would get unreasonably
//! large the convolution is evaluated in [`HpReal`] arithmetic with a
//! rigorous bound on the accumulated rounding error, doubling the working
//! precision until the bound and two successive precisions meet the target.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::hp::HpReal;
use crate::params::BlaschkeParams;
use crate::series::{CoefficientSeries, Engine};

/// Integers larger than this many bits send `coeff_exact` to the
/// high-precision path.
pub const EXACT_BITS_LIMIT: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionPolicy {
    pub target_abs_error: f64,
    pub start_bits: u64,
    pub max_bits: u64,
}

impl PrecisionPolicy {
    pub fn new(target_abs_error: f64, start_bits: u64, max_bits: u64) -> Result<Self> {
        if !(target_abs_error > 0.0 && target_abs_error.is_finite()) {
            return Err(Error::Precondition(format!(
                "target error {target_abs_error} must be positive and finite"
            )));
        }
        if start_bits < 64 {
            return Err(Error::Precondition("start_bits must be at least 64".into()));
        }
        if max_bits < start_bits {
            return Err(Error::Precondition("max_bits must be >= start_bits".into()));
        }
        Ok(Self {
            target_abs_error,
            start_bits,
            max_bits,
        })
    }

    /// Same policy with a different precision ceiling.
    pub fn with_max_bits(&self, max_bits: u64) -> Result<Self> {
        Self::new(self.target_abs_error, self.start_bits, max_bits)
    }

    /// Significant bits needed to round a value of magnitude ≤ 1 within the
    /// target.
    fn output_bits(&self) -> u64 {
        64 + (-self.target_abs_error.log2()).ceil().max(0.0) as u64
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            target_abs_error: 1e-15,
            start_bits: 64,
            max_bits: 1 << 20,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Rational,
    HighPrecision { bits: u64 },
}

/// One coefficient with a certified error bound.
#[derive(Clone, Debug)]
pub struct ExactCoefficient {
    pub value: HpReal,
    pub error_bound: HpReal,
    /// The coefficient as an exact fraction, when the rational path ran.
    pub rational: Option<BigRational>,
    pub method: Method,
}

impl ExactCoefficient {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// Starting precision `64 + ⌈n log2((1+λ)/(1-λ))⌉`: the convolution terms
/// grow to roughly `α₀^-n` before they cancel.
pub fn working_bits_heuristic(params: &BlaschkeParams) -> u64 {
    let l = params.lambda_f64();
    64 + (params.n() as f64 * ((1.0 + l) / (1.0 - l)).log2()).ceil() as u64
}

/// Rough bit size of `E_k` and `q^(n+k)`.
pub fn exact_size_estimate(params: &BlaschkeParams, k: u64) -> u64 {
    let (p, q) = params.lambda_parts();
    let width = p.bits().max(q.bits());
    (params.n() + k) * (width + 1) + 64
}

/// `B̂(k)` to within `policy.target_abs_error`.
pub fn coeff_exact(params: &BlaschkeParams, k: u64, policy: &PrecisionPolicy) -> Result<ExactCoefficient> {
    if exact_size_estimate(params, k) <= EXACT_BITS_LIMIT {
        Ok(coeff_rational(params, k, policy))
    } else {
        coeff_high_precision(params, k, policy)
    }
}

fn coeff_rational(params: &BlaschkeParams, k: u64, policy: &PrecisionPolicy) -> ExactCoefficient {
    let e = convolution_integer(params, k);
    let q_pow = scale_denominator(params, k);
    let bits = policy.output_bits();
    let value = HpReal::from_ratio(&e, &q_pow, bits);
    let error_bound = value.abs().ldexp(-(bits as i64));
    ExactCoefficient {
        value,
        error_bound,
        rational: Some(BigRational::new(e, q_pow)),
        method: Method::Rational,
    }
}

/// `q^(n+k)`.
pub fn scale_denominator(params: &BlaschkeParams, k: u64) -> BigInt {
    let (_, q) = params.lambda_parts();
    Pow::pow(q, params.n() + k)
}

/// `E_k = B̂(k) · q^(n+k)` by the binomial convolution.
pub fn convolution_integer(params: &BlaschkeParams, k: u64) -> BigInt {
    let n = params.n();
    let (p, q) = params.lambda_parts();
    let p2 = p * p;
    let q2 = q * q;

    // T_0 = (-1)^n C(n-1+k, n-1) p^(n+k)
    let mut term = binomial(n - 1 + k, n - 1) * Pow::pow(p, n + k);
    if n % 2 == 1 {
        term = -term;
    }
    let mut sum = term.clone();
    for j in 0..n.min(k) {
        // T_{j+1} = -T_j (n-j)(k-j) q² / ((j+1)(n-1+k-j) p²), exact division
        let num = BigInt::from((n - j) as u128 * (k - j) as u128) * &q2;
        let den = BigInt::from((j + 1) as u128 * (n - 1 + k - j) as u128) * &p2;
        term = -(term * num) / den;
        sum += &term;
    }
    sum
}

/// `C(a, b)` exactly.
pub fn binomial(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut c = BigInt::one();
    for i in 1..=b {
        c = c * BigInt::from(a - b + i) / BigInt::from(i);
    }
    c
}

/// Convolution in `bits`-bit arithmetic: the value and a rigorous bound on
/// its absolute error.
pub fn convolution_at_bits(params: &BlaschkeParams, k: u64, bits: u64) -> (HpReal, HpReal) {
    let n = params.n();
    let (p, q) = params.lambda_parts();
    let m = n + k;

    // C(n-1+k, n-1) with one rounding per factor
    let small = (n - 1).min(k);
    let base = (n - 1).max(k);
    let mut binom = HpReal::from_int(1);
    for i in 1..=small {
        binom = binom.mul_int(&BigInt::from(base + i)).div_round(&BigInt::from(i), bits);
    }

    // λ^m by squaring; a rounding at the level representing λ^a is raised
    // to the power m/a, so all of them together weigh at most 3m + 64
    let lam = HpReal::from_ratio(p, q, bits);
    let mut pow = HpReal::from_int(1);
    let mut sq = lam;
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            pow = (&pow * &sq).round_to(bits);
        }
        e >>= 1;
        if e > 0 {
            sq = (&sq * &sq).round_to(bits);
        }
    }

    let mut term = (&binom * &pow).round_to(bits);
    if n % 2 == 1 {
        term = -&term;
    }
    // roundings carried by the first term
    let base_count = small + 3 * m + 64 + 1;

    let p2 = p * p;
    let q2 = q * q;
    let mut sum = term.clone();
    let mut abs_sum = term.abs();
    let steps = n.min(k);
    for j in 0..steps {
        let num = BigInt::from((n - j) as u128 * (k - j) as u128) * &q2;
        let den = BigInt::from((j + 1) as u128 * (n - 1 + k - j) as u128) * &p2;
        term = -&term.mul_int(&num).div_round(&den, bits);
        sum = &sum + &term;
        abs_sum = (&abs_sum + &term.abs()).round_to(64);
    }
    // each term has relative error ≤ (1+u)^c - 1 ≤ 2cu with u = 2^-bits and
    // c ≤ base_count + steps; the final rounding adds one more u·|sum|
    let count = base_count + steps;
    let value = sum.round_to(bits);
    // abs_sum was itself rounded upward by at most 2^-63 relative per step
    let slack = 2 * count + 2 + (steps + 1) / (1 << 20) + 1;
    let error = abs_sum.mul_int(&BigInt::from(slack)).ldexp(-(bits as i64));
    (value, error)
}

/// High-precision evaluation with precision doubling.
pub fn coeff_high_precision(params: &BlaschkeParams, k: u64, policy: &PrecisionPolicy) -> Result<ExactCoefficient> {
    let target = HpReal::from_f64(policy.target_abs_error);
    let mut bits = policy.start_bits.max(working_bits_heuristic(params));
    let mut previous: Option<HpReal> = None;
    let mut last_error = f64::INFINITY;
    while bits <= policy.max_bits {
        let (value, error) = convolution_at_bits(params, k, bits);
        let agrees = previous.as_ref().is_some_and(|prev| (&value - prev).abs() <= target);
        if error <= target && agrees {
            return Ok(ExactCoefficient {
                value,
                error_bound: error,
                rational: None,
                method: Method::HighPrecision { bits },
            });
        }
        last_error = error.to_f64();
        previous = Some(value);
        bits = bits.saturating_mul(2);
    }
    Err(Error::PrecisionExhausted {
        bits: policy.max_bits,
        achieved: last_error,
        target: policy.target_abs_error,
    })
}

/// `B̂(0..=kmax)` from the exact integer recurrence
///
/// ```text
/// p(m+1) E_{m+1} = ((q²+p²)m - n(q²-p²)) E_m - p q² (m-1) E_{m-1}
/// ```
///
/// Falls back to per-coefficient [`coeff_exact`] once the integers pass
/// [`EXACT_BITS_LIMIT`].
pub fn coeff_series_exact(params: &BlaschkeParams, kmax: usize, policy: &PrecisionPolicy) -> Result<CoefficientSeries> {
    if exact_size_estimate(params, kmax as u64) > EXACT_BITS_LIMIT {
        return series_by_convolution(params, kmax, policy);
    }
    let n = BigInt::from(params.n());
    let (p, q) = params.lambda_parts();
    let (p2, q2) = (p * p, q * q);
    let lead = &q2 + &p2;
    let shift = (&q2 - &p2) * &n;
    let back = p * &q2;

    let mut wide = Vec::with_capacity(kmax + 1);
    let mut e_prev = BigInt::zero();
    let mut e_cur: BigInt = Pow::pow(-p.clone(), params.n());
    let mut denom: BigInt = Pow::pow(q, params.n());
    for m in 0..=kmax {
        wide.push(HpReal::from_ratio(&e_cur, &denom, 64));
        if m == kmax {
            break;
        }
        let mm = BigInt::from(m);
        let num = (&lead * &mm - &shift) * &e_cur - &back * (&mm - 1u32) * &e_prev;
        let next = num / (p * BigInt::from(m + 1));
        e_prev = std::mem::replace(&mut e_cur, next);
        denom *= q;
    }
    let values = wide.iter().map(HpReal::to_f64).collect();
    Ok(CoefficientSeries {
        params: params.clone(),
        engine: Engine::Exact,
        values,
        achieved_abs_error: f64::EPSILON,
        wide: Some(wide),
        max_imag: 0.0,
    })
}

fn series_by_convolution(params: &BlaschkeParams, kmax: usize, policy: &PrecisionPolicy) -> Result<CoefficientSeries> {
    use rayon::prelude::*;
    let coeffs: Vec<ExactCoefficient> = (0..=kmax as u64)
        .into_par_iter()
        .map(|k| coeff_exact(params, k, policy))
        .collect::<Result<_>>()?;
    let achieved = coeffs.iter().map(|c| c.error_bound.to_f64()).fold(0.0, f64::max) + f64::EPSILON;
    let wide: Vec<HpReal> = coeffs.into_iter().map(|c| c.value.round_to(64)).collect();
    Ok(CoefficientSeries {
        params: params.clone(),
        engine: Engine::Exact,
        values: wide.iter().map(HpReal::to_f64).collect(),
        achieved_abs_error: achieved,
        wide: Some(wide),
        max_imag: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: i64, b: i64, n: u64) -> BlaschkeParams {
        BlaschkeParams::from_fraction(a, b, n).unwrap()
    }

    fn frac(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn exact(p: &BlaschkeParams, k: u64) -> BigRational {
        coeff_exact(p, k, &PrecisionPolicy::default())
            .unwrap()
            .rational
            .unwrap()
    }

    #[test]
    fn constant_term_is_minus_lambda_to_the_n() {
        assert_eq!(exact(&params(1, 2, 1), 0), frac(-1, 2));
        assert_eq!(exact(&params(1, 2, 10), 0), frac(1, 1024));
        assert_eq!(exact(&params(2, 3, 3), 0), frac(-8, 27));
    }

    #[test]
    fn mobius_map_first_coefficient() {
        assert_eq!(exact(&params(1, 2, 1), 1), frac(3, 4));
    }

    // (z² - z + 1/4) · Σ (m+1) 2^-m z^m, coefficient of z²:
    // 1·1 - 1·(2/2) + (1/4)·(3/4) = 3/16
    #[test]
    fn square_second_coefficient_from_hand_convolution() {
        assert_eq!(exact(&params(1, 2, 2), 2), frac(3, 16));
    }

    #[test]
    fn series_matches_small_hand_values() {
        let s = coeff_series_exact(&params(1, 2, 2), 2, &PrecisionPolicy::default()).unwrap();
        assert_eq!(s.values, vec![0.25, -0.75, 0.1875]);
        let s = coeff_series_exact(&params(3, 7, 1), 0, &PrecisionPolicy::default()).unwrap();
        assert_eq!(s.values, vec![-3.0 / 7.0]);
        assert_eq!(s.engine, Engine::Exact);
    }

    #[test]
    fn recurrence_reproduces_convolution_exactly() {
        for (a, b, n) in [(1, 2, 5), (3, 4, 7), (2, 5, 12), (1, 3, 1), (5, 6, 3)] {
            let pr = params(a, b, n);
            let s = coeff_series_exact(&pr, 60, &PrecisionPolicy::default()).unwrap();
            let wide = s.wide.as_ref().unwrap();
            for k in 0..=60u64 {
                let e = convolution_integer(&pr, k);
                let v = HpReal::from_ratio(&e, &scale_denominator(&pr, k), 64);
                assert_eq!(wide[k as usize], v, "lambda={a}/{b} n={n} k={k}");
            }
        }
    }

    #[test]
    fn high_precision_path_agrees_with_rational_path() {
        let policy = PrecisionPolicy::new(1e-30, 64, 1 << 16).unwrap();
        for (a, b, n, k) in [(1, 2, 40, 100), (3, 4, 25, 60), (1, 4, 64, 3), (1, 2, 8, 8)] {
            let pr = params(a, b, n);
            let hp = coeff_high_precision(&pr, k, &policy).unwrap();
            let ex = coeff_rational(&pr, k, &policy);
            let diff = (&hp.value - &ex.value).abs();
            assert!(diff <= HpReal::from_f64(2e-30), "{a}/{b} n={n} k={k}: {diff}");
            assert!(hp.error_bound <= HpReal::from_f64(1e-30));
            assert!(matches!(hp.method, Method::HighPrecision { .. }));
        }
    }

    #[test]
    fn error_bound_covers_low_precision_evaluation() {
        // at deliberately small precision the bound must still hold
        let pr = params(1, 2, 30);
        for k in [10u64, 45, 90] {
            let truth = coeff_rational(&pr, k, &PrecisionPolicy::new(1e-40, 64, 64).unwrap()).value;
            for bits in [16u64, 24, 40] {
                let (v, err) = convolution_at_bits(&pr, k, bits);
                assert!((&v - &truth).abs() <= err, "k={k} bits={bits}");
            }
        }
    }

    #[test]
    fn precision_exhaustion_is_reported() {
        let pr = params(1, 2, 200);
        let policy = PrecisionPolicy::new(1e-300, 64, 64).unwrap();
        let err = coeff_high_precision(&pr, 300, &policy).unwrap_err();
        assert!(matches!(err, Error::PrecisionExhausted { .. }));
    }

    #[test]
    fn policy_validation() {
        assert!(PrecisionPolicy::new(1e-12, 32, 128).is_err());
        assert!(PrecisionPolicy::new(1e-12, 128, 64).is_err());
        assert!(PrecisionPolicy::new(0.0, 64, 64).is_err());
    }

    #[test]
    fn heuristic_grows_linearly_with_n() {
        let a = working_bits_heuristic(&params(1, 2, 100));
        let b = working_bits_heuristic(&params(1, 2, 200));
        assert_eq!(a, 64 + 159);
        assert_eq!(b, 64 + 317);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(10, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(binomial(60, 30), "118264581564861424".parse::<BigInt>().unwrap());
    }
}
