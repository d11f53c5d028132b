//! Weyl sums of the phase `n φ(k/n)` over the critical window
//! `I_n = [α₀⁻¹n - n^{3/4}, α₀⁻¹n - n^{1/2}]`, with
//! `φ(α) = C (α₀⁻¹ - α)^{3/2}` and
//! `C = (2/(3π)) (1-λ)^{3/2} / (λ(1+λ))^{1/2}`.

use std::f64::consts::{PI, TAU};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::params::{ceil_shifted, floor_shifted, ratio_to_f64, BlaschkeParams, Shift};

/// Inclusive window `[⌈α₀⁻¹n - n^{3/4}⌉, ⌊α₀⁻¹n - n^{1/2}⌋]`.
pub fn critical_window(params: &BlaschkeParams) -> Result<(u64, u64)> {
    let n = params.n();
    let r = params.right_critical();
    let lo = ceil_shifted(&r, 1, n, 3, 4, Shift::Down).max(0);
    let hi = floor_shifted(&r, 1, n, 1, 2, Shift::Down);
    if hi < lo {
        return Err(Error::EmptyWindow { n });
    }
    Ok((lo as u64, hi as u64))
}

/// `C` in `φ(α) = C (α₀⁻¹ - α)^{3/2}`.
pub fn phase_constant(lambda: f64) -> f64 {
    2.0 / (3.0 * PI) * (1.0 - lambda).powf(1.5) / (lambda * (1.0 + lambda)).sqrt()
}

#[derive(Clone, Debug)]
pub struct WeylExperiment {
    pub lambda: BigRational,
    pub n: u64,
    pub window: (u64, u64),
    pub j: i64,
    /// `s_k = {n φ(k/n)}` for `k` in the window, in order.
    pub s_values: Vec<f64>,
    /// `A_K = Σ_{k ≤ K} e(j s_k)`.
    pub partial_sums: Vec<Complex64>,
    pub max_abs_a: f64,
}

impl WeylExperiment {
    /// Counts of `s_k` in `bins` equal subintervals of `[0, 1)`.
    pub fn histogram(&self, bins: usize) -> Vec<usize> {
        let mut h = vec![0; bins];
        for s in &self.s_values {
            let b = ((s * bins as f64) as usize).min(bins - 1);
            h[b] += 1;
        }
        h
    }

    /// `log max|A| / log n`.
    pub fn growth_exponent(&self) -> f64 {
        self.max_abs_a.ln() / (self.n as f64).ln()
    }
}

pub fn weyl_sums(lambda: &BigRational, n: u64, j: i64) -> Result<WeylExperiment> {
    if j == 0 {
        return Err(Error::Precondition("frequency j must be nonzero".into()));
    }
    let params = BlaschkeParams::new(lambda.clone(), n)?;
    let window = critical_window(&params)?;
    let c = phase_constant(params.lambda_f64());
    let root_n = (n as f64).sqrt();
    let r = params.right_critical();
    let mut s_values = Vec::with_capacity((window.1 - window.0 + 1) as usize);
    let mut partial_sums = Vec::with_capacity(s_values.capacity());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut max_abs_a = 0.0f64;
    for k in window.0..=window.1 {
        let d = ratio_to_f64(&(&r - BigRational::from_integer(BigInt::from(k))));
        let phase = c * d.powf(1.5) / root_n;
        let s = phase - phase.floor();
        let (sin, cos) = (TAU * (j as f64) * s).sin_cos();
        acc += Complex64::new(cos, sin);
        max_abs_a = max_abs_a.max(acc.norm());
        s_values.push(s);
        partial_sums.push(acc);
    }
    Ok(WeylExperiment {
        lambda: lambda.clone(),
        n,
        window,
        j,
        s_values,
        partial_sums,
        max_abs_a,
    })
}
