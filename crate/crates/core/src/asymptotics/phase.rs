//! Phase of the coefficient integral.
//!
//! On the unit circle `b(e^{it}) = e^{i f(t)}` with
//! `f(t) = t + 2 atan2(λ sin t, 1 - λ cos t)`, hence
//! `π B̂(k) = Re ∫₀^π e^{i g(t)} dt` for `g(t) = n f(t) - k t`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::params::{ratio_to_f64, BlaschkeParams};

#[derive(Clone, Debug)]
pub struct PhaseFunction {
    params: BlaschkeParams,
    k: u64,
    lam: f64,
    n: f64,
    kf: f64,
}

impl PhaseFunction {
    pub fn new(params: &BlaschkeParams, k: u64) -> Self {
        Self {
            params: params.clone(),
            k,
            lam: params.lambda_f64(),
            n: params.n() as f64,
            kf: k as f64,
        }
    }

    pub fn params(&self) -> &BlaschkeParams {
        &self.params
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// `α = k/n`, exact.
    pub fn alpha(&self) -> BigRational {
        BigRational::new(BigInt::from(self.k), BigInt::from(self.params.n()))
    }

    pub fn f(&self, t: f64) -> f64 {
        let l = self.lam;
        t + 2.0 * (l * t.sin()).atan2(1.0 - l * t.cos())
    }

    /// `f′(t) = (1 - λ²)/(1 + λ² - 2λ cos t)`.
    pub fn f_prime(&self, t: f64) -> f64 {
        let l = self.lam;
        (1.0 - l * l) / self.denominator(t)
    }

    pub fn g(&self, t: f64) -> f64 {
        self.n * self.f(t) - self.kf * t
    }

    pub fn g1(&self, t: f64) -> f64 {
        self.n * self.f_prime(t) - self.kf
    }

    /// `g″(t) = -2λn(1 - λ²) sin t / (1 + λ² - 2λ cos t)²`, negative on `(0, π)`.
    pub fn g2(&self, t: f64) -> f64 {
        let l = self.lam;
        let d = self.denominator(t);
        -2.0 * l * self.n * (1.0 - l * l) * t.sin() / (d * d)
    }

    /// `1 + λ² - 2λ cos t`, written as `(1-λ)² + 4λ sin²(t/2)` to avoid
    /// cancellation near `t = 0`.
    fn denominator(&self, t: f64) -> f64 {
        let l = self.lam;
        let s = (0.5 * t).sin();
        (1.0 - l) * (1.0 - l) + 4.0 * l * s * s
    }

    /// `g′(0) = nα₀⁻¹ - k`, from exact rationals.
    pub fn g1_at_zero(&self) -> f64 {
        ratio_to_f64(&(self.params.right_critical() - BigInt::from(self.k)))
    }

    /// `g′(π) = nα₀ - k`, from exact rationals.
    pub fn g1_at_pi(&self) -> f64 {
        ratio_to_f64(&(self.params.left_critical() - BigInt::from(self.k)))
    }

    /// `cos φ₊ = (α(1+λ²) - (1-λ²)) / (2λα)` when `α₀ ≤ α ≤ α₀⁻¹`.
    pub fn cos_stationary(&self) -> Option<BigRational> {
        let alpha = self.alpha();
        if alpha < self.params.alpha0() || alpha > self.params.alpha0_inv() {
            return None;
        }
        let l = self.params.lambda();
        let one = BigRational::one();
        let l2 = l * l;
        let two = BigRational::from_integer(BigInt::from(2));
        let c = (&alpha * (&one + &l2) - (&one - &l2)) / (two * l * &alpha);
        debug_assert!(c.abs() <= one);
        Some(c)
    }

    /// `φ₊ ∈ [0, π]`, or `None` when `g′` has no zero on `[0, π]`.
    pub fn stationary_point(&self) -> Option<f64> {
        self.cos_stationary().map(|c| ratio_to_f64(&c).clamp(-1.0, 1.0).acos())
    }

    /// `|g″(φ₊)| = k √((α - α₀)(α₀⁻¹ - α))`.
    pub fn g2_at_stationary(&self) -> Result<f64> {
        if self.cos_stationary().is_none() {
            return Err(Error::NoStationaryPoint {
                alpha: ratio_to_f64(&self.alpha()),
            });
        }
        let alpha = self.alpha();
        let prod = (&alpha - self.params.alpha0()) * (self.params.alpha0_inv() - &alpha);
        if prod.is_zero() {
            return Ok(0.0);
        }
        Ok(self.kf * ratio_to_f64(&prod).sqrt())
    }

    /// Van der Corput bound `2/|g′(a)| + 2/|g′(b)| ≥ |∫_a^b e^{ig}|`.
    /// `g′` is monotone on `[0, π]`, so it suffices that it has one strict
    /// sign at both ends.
    pub fn vdc_bound(&self, a: f64, b: f64) -> Result<f64> {
        if !(0.0..=std::f64::consts::PI).contains(&a) || !(0.0..=std::f64::consts::PI).contains(&b) || a > b {
            return Err(Error::Precondition(format!(
                "interval [{a}, {b}] is not inside [0, pi]"
            )));
        }
        let (ga, gb) = (self.g1_exactish(a), self.g1_exactish(b));
        if ga == 0.0 || gb == 0.0 || ga.signum() != gb.signum() {
            return Err(Error::Precondition(format!(
                "g' changes sign on [{a}, {b}] (g'(a) = {ga}, g'(b) = {gb})"
            )));
        }
        Ok(2.0 / ga.abs() + 2.0 / gb.abs())
    }

    fn g1_exactish(&self, t: f64) -> f64 {
        if t == 0.0 {
            self.g1_at_zero()
        } else if t == std::f64::consts::PI {
            self.g1_at_pi()
        } else {
            self.g1(t)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn phase(a: i64, b: i64, n: u64, k: u64) -> PhaseFunction {
        PhaseFunction::new(&BlaschkeParams::from_fraction(a, b, n).unwrap(), k)
    }

    #[test]
    fn f_maps_half_circle_onto_itself() {
        let ph = phase(1, 2, 3, 0);
        assert_eq!(ph.f(0.0), 0.0);
        assert!((ph.f(PI) - PI).abs() < 1e-15);
    }

    #[test]
    fn vdc_bound_with_endpoint_slopes() {
        let ph = phase(1, 2, 16, 4);
        let got = ph.vdc_bound(0.0, PI).unwrap();
        let want = 2.0 / (48.0 - 4.0) + 2.0 / (16.0 / 3.0 - 4.0);
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn vdc_rejects_interval_with_stationary_point() {
        let ph = phase(1, 2, 12, 12);
        assert!(matches!(ph.vdc_bound(0.0, PI), Err(Error::Precondition(_))));
        let phi = ph.stationary_point().unwrap();
        assert!(ph.vdc_bound(0.0, phi - 0.1).is_ok());
    }

    #[test]
    fn stationary_point_examples() {
        // α = α₀⁻¹ = 3
        assert_eq!(phase(1, 2, 10, 30).stationary_point(), Some(0.0));
        // α = α₀ = 1/3
        assert_eq!(phase(1, 2, 9, 3).stationary_point(), Some(PI));
        let phi = phase(1, 2, 10, 10).stationary_point().unwrap();
        assert!((phi - PI / 3.0).abs() < 1e-15);
        assert!(phase(1, 2, 10, 31).stationary_point().is_none());
        assert!(phase(1, 2, 10, 0).stationary_point().is_none());
    }

    #[test]
    fn g2_closed_form_examples() {
        let ph = phase(1, 2, 12, 12);
        let want = 12.0 * (2.0f64 / 3.0).sqrt() * 2f64.sqrt();
        assert!((ph.g2_at_stationary().unwrap() - want).abs() < 1e-12);
        assert_eq!(phase(1, 2, 10, 30).g2_at_stationary().unwrap(), 0.0);
        assert!(matches!(
            phase(1, 2, 10, 31).g2_at_stationary(),
            Err(Error::NoStationaryPoint { .. })
        ));
        let near = phase(1, 2, 1000, 2999).g2_at_stationary().unwrap();
        assert!(near < 0.2 * phase(1, 2, 1000, 2900).g2_at_stationary().unwrap());
    }

    #[test]
    fn g2_matches_central_difference() {
        for (a, b, n, k) in [(1, 2, 12, 12), (1, 2, 100, 150), (1, 4, 64, 80), (3, 4, 40, 100)] {
            let ph = phase(a, b, n, k);
            let phi = ph.stationary_point().unwrap();
            let h = 1e-5;
            let fd = (ph.g1(phi + h) - ph.g1(phi - h)) / (2.0 * h);
            let closed = ph.g2_at_stationary().unwrap();
            assert!((fd.abs() - closed).abs() <= 1e-8 * closed, "{fd} vs {closed}");
            assert!((ph.g2(phi).abs() - closed).abs() <= 1e-12 * closed);
            assert!(ph.g1(phi).abs() <= 1e-10 * n as f64);
        }
    }

    #[test]
    fn endpoint_slopes_match_direct_evaluation() {
        for (a, b, n, k) in [(1, 2, 16, 4), (1, 4, 100, 7), (3, 4, 33, 200), (2, 3, 5, 5)] {
            let ph = phase(a, b, n, k);
            let z = ph.g1_at_zero();
            let p = ph.g1_at_pi();
            assert!((ph.g1(0.0) - z).abs() <= 1e-12 * z.abs().max(1.0));
            assert!((ph.g1(PI) - p).abs() <= 1e-12 * p.abs().max(1.0));
        }
    }

    proptest! {
        #[test]
        fn g2_negative_inside(num in 1i64..20, n in 1u64..500, k in 0u64..2000) {
            let ph = phase(num, 21, n, k);
            for i in 1..100 {
                let t = PI * i as f64 / 100.0;
                prop_assert!(ph.g2(t) < 0.0);
            }
        }

        #[test]
        fn stationary_point_zeroes_g1(num in 1i64..20, n in 1u64..500, k in 1u64..3000) {
            let ph = phase(num, 21, n, k);
            if let Some(phi) = ph.stationary_point() {
                prop_assert!((0.0..=PI).contains(&phi));
                prop_assert!(ph.g1(phi).abs() <= 1e-10 * n as f64 + 1e-9 * k as f64);
            }
        }
    }
}
