//! Cauchy-estimate bounds on circles `|z| = s`.
//!
//! On `|z| = s` the factor `b` has maximal modulus `(s - λ)/(1 - λs)` for
//! `1 < s < 1/λ` and `(s + λ)/(1 + λs)` for `0 < s < 1`, so
//! `|B̂(k)| ≤ max|b|^n / s^k`. Summing the geometric tail and minimizing over
//! the radius gives a rigorous bound on the omitted coefficients. Every
//! radius yields a valid bound, so the minimizer only affects sharpness.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::params::BlaschkeParams;

const GRID: usize = 256;
const GOLDEN_STEPS: usize = 80;

/// Natural log of `Σ_{k ≥ big_k} |B̂(k)|`'s bound, or `+∞` when
/// `big_k ≤ α₀⁻¹ n`.
pub fn tail_bound_ln(params: &BlaschkeParams, big_k: u64) -> f64 {
    if BigRational::from_integer(BigInt::from(big_k)) <= params.right_critical() {
        return f64::INFINITY;
    }
    let lam = params.lambda_f64();
    let n = params.n() as f64;
    let kk = big_k as f64;
    let upper = -lam.ln();
    let objective = |u: f64| {
        let s = u.exp();
        n * ((s - lam) / (1.0 - lam * s)).ln() - kk * u - (-(-u).exp_m1()).ln()
    };
    minimize(objective, 0.0, upper)
}

/// `Σ_{k ≥ big_k} |B̂(k)| ≤ tail_bound(params, big_k)`; `+∞` when
/// `big_k ≤ α₀⁻¹ n`. Finite bounds never round down to zero.
pub fn tail_bound(params: &BlaschkeParams, big_k: u64) -> f64 {
    exp_upper(tail_bound_ln(params, big_k))
}

/// `tail_bound` in base 2, for bounds beyond the double range.
pub fn tail_bound_log2(params: &BlaschkeParams, big_k: u64) -> f64 {
    tail_bound_ln(params, big_k) / std::f64::consts::LN_2
}

/// Natural log of the single-coefficient radius bound
/// `min_s max_{|z|=s} |B| / s^k`. Inside `[α₀n, α₀⁻¹n]` no radius beats the
/// trivial bound 1 and `0` is returned.
pub fn radius_bound_ln(params: &BlaschkeParams, k: u64) -> f64 {
    let kr = BigRational::from_integer(BigInt::from(k));
    let lam = params.lambda_f64();
    let n = params.n() as f64;
    let kk = k as f64;
    if kr > params.right_critical() {
        let objective = |u: f64| {
            let s = u.exp();
            n * ((s - lam) / (1.0 - lam * s)).ln() - kk * u
        };
        minimize(objective, 0.0, -lam.ln()).min(0.0)
    } else if kr < params.left_critical() {
        // s = e^-v with v in (0, 40]; below e^-40 the bound is flat in s
        let objective = |v: f64| {
            let s = (-v).exp();
            n * ((s + lam) / (1.0 + lam * s)).ln() + kk * v
        };
        minimize(objective, 0.0, 40.0).min(0.0)
    } else {
        0.0
    }
}

/// `exp(x)` kept strictly positive when `x` is finite.
pub(crate) fn exp_upper(x: f64) -> f64 {
    if x == f64::INFINITY {
        return f64::INFINITY;
    }
    let v = x.exp();
    if v == 0.0 {
        f64::from_bits(1)
    } else {
        v
    }
}

/// Minimum of a function on the open interval `(lo, hi)`: grid search then
/// golden-section refinement around the best grid point.
fn minimize(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let h = (hi - lo) / (GRID + 1) as f64;
    let at = |i: usize| lo + h * i as f64;
    let mut best_i = 1;
    let mut best = f64::INFINITY;
    for i in 1..=GRID {
        let v = f(at(i));
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let (mut a, mut b) = (at(best_i - 1), at(best_i + 1));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_STEPS {
        if fc.is_nan() || fd.is_nan() {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        best = best.min(fc).min(fd);
    }
    best
}
