//! Uniform Airy approximation of `B̂(k)` for `k/n` near `α₀⁻¹`:
//!
//! ```text
//! B̂(k) ≈ a₀ Ai(-n^{2/3} δ²) / n^{1/3},
//! δ² = (1-λ)/(λ(1+λ))^{1/3} · (α₀⁻¹ - k/n),
//! a₀ = (1-λ)^{1/4}/(λ(1+λ))^{1/12} · √2 / (√α (α-α₀)^{1/4}),  α = k/n.
//! ```
//!
//! The second coefficient `a₁` of the expansion vanishes.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::asymptotics::airy::{airy, AI_ZERO};
use crate::engines::coeff_series_auto;
use crate::error::{Error, Result};
use crate::params::{ceil_shifted, ratio_to_f64, BlaschkeParams, Shift};

#[derive(Clone, Debug, PartialEq)]
pub struct AiryPrediction {
    pub k: u64,
    pub alpha: f64,
    pub gamma2: f64,
    pub delta2: f64,
    pub a0: f64,
    pub a1: f64,
    pub airy_argument: f64,
    pub predicted: f64,
    /// `k ∈ [α₀⁻¹n - n^{3/4}, α₀⁻¹n]`.
    pub in_window: bool,
}

/// `(λ(1+λ))^{1/3}`.
fn cube_root_scale(lam: f64) -> f64 {
    (lam * (1.0 + lam)).cbrt()
}

/// Limit of `B̂(k) n^{1/3}` at `k = α₀⁻¹n`:
/// `(1-λ)/(λ(1+λ))^{1/3} · Ai(0)`.
pub fn boundary_constant(params: &BlaschkeParams) -> f64 {
    let lam = params.lambda_f64();
    (1.0 - lam) / cube_root_scale(lam) * AI_ZERO
}

/// Inclusive `k` range `[⌈α₀⁻¹n - n^{3/4}⌉, ⌊α₀⁻¹n⌋]` where predictions
/// are expected to hold.
pub fn prediction_window(params: &BlaschkeParams) -> (i64, i64) {
    let r = params.right_critical();
    let lo = ceil_shifted(&r, 1, params.n(), 3, 4, Shift::Down);
    let hi: i64 = r.floor().to_integer().try_into().expect("fits in i64");
    (lo, hi)
}

/// Prediction for `k`. Defined for `k/n > α₀`, where `a₀` is finite.
pub fn airy_predict(params: &BlaschkeParams, k: u64) -> Result<AiryPrediction> {
    let n = params.n();
    let alpha_exact = BigRational::new(BigInt::from(k), BigInt::from(n));
    if alpha_exact <= params.alpha0() {
        return Err(Error::Precondition(format!(
            "k/n = {alpha_exact} must exceed alpha0 = {}",
            params.alpha0()
        )));
    }
    let lam = params.lambda_f64();
    let nf = n as f64;
    let alpha = ratio_to_f64(&alpha_exact);
    let distance = ratio_to_f64(&(params.alpha0_inv() - &alpha_exact));
    let scale = cube_root_scale(lam);
    let gamma2 = (1.0 - lam) / scale * distance;
    let delta2 = gamma2;
    let above = ratio_to_f64(&(&alpha_exact - params.alpha0()));
    let a0 =
        (1.0 - lam).powf(0.25) / (lam * (1.0 + lam)).powf(1.0 / 12.0) * 2f64.sqrt() / (alpha.sqrt() * above.powf(0.25));
    let airy_argument = -nf.powf(2.0 / 3.0) * delta2;
    let predicted = a0 * airy(airy_argument) / nf.cbrt();
    let (lo, hi) = prediction_window(params);
    let in_window = (lo..=hi).contains(&(k as i64));
    Ok(AiryPrediction {
        k,
        alpha,
        gamma2,
        delta2,
        a0,
        a1: 0.0,
        airy_argument,
        predicted,
        in_window,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupCoefficient {
    pub k: u64,
    /// `|B̂(k)|`.
    pub value: f64,
}

/// Largest `|B̂(k)|` over the default range.
pub fn sup_coefficient(params: &BlaschkeParams) -> Result<SupCoefficient> {
    let series = coeff_series_auto(params, params.default_kmax())?;
    let (k, v) = series
        .values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("nonempty series");
    Ok(SupCoefficient {
        k: k as u64,
        value: v.abs(),
    })
}
