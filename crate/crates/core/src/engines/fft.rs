//! FFT engine: sample `B` at the `N`-th roots of unity and take one forward
//! transform. The extracted coefficient is `Σ_{m≥0} B̂(k + mN)`, so the
//! aliasing error is bounded by the tail beyond `N - kmax`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::engines::tail::tail_bound;
use crate::error::{Error, Result};
use crate::params::BlaschkeParams;
use crate::series::{CoefficientSeries, Engine};

/// Largest aliasing bound accepted.
pub const ALIAS_TARGET: f64 = 1e-13;

/// Smallest power of two `≥ 8 ⌈n/α₀⌉`.
pub fn default_grid(params: &BlaschkeParams) -> usize {
    let span = crate::params::ceil_to_u64(&params.right_critical()) as usize;
    (8 * span).next_power_of_two()
}

/// Largest grid the default rule will double up to.
pub const MAX_DEFAULT_GRID: usize = 1 << 26;

/// `false` for a NaN bound.
fn aliasing_ok(bound: f64) -> bool {
    bound <= ALIAS_TARGET
}

/// Coefficients `0..=kmax` on the default grid, doubled while `kmax` or the
/// aliasing bound requires it. Small `n` with `λ` near 1 has a slowly decaying
/// geometric tail and needs the extra room.
pub fn coeff_series_fft_default(params: &BlaschkeParams, kmax: usize) -> Result<CoefficientSeries> {
    let mut grid = default_grid(params).max((2 * kmax + 2).next_power_of_two());
    while grid < MAX_DEFAULT_GRID && !aliasing_ok(tail_bound(params, (grid - kmax) as u64)) {
        grid *= 2;
    }
    coeff_series_fft(params, kmax, grid)
}

pub fn coeff_series_fft(params: &BlaschkeParams, kmax: usize, grid: usize) -> Result<CoefficientSeries> {
    if !grid.is_power_of_two() {
        return Err(Error::GridTooSmall {
            grid,
            kmax,
            reason: "grid size must be a power of two".into(),
        });
    }
    if grid < 2 * kmax + 2 {
        return Err(Error::GridTooSmall {
            grid,
            kmax,
            reason: format!("need at least {} points", 2 * kmax + 2),
        });
    }
    let alias = tail_bound(params, (grid - kmax) as u64);
    if !aliasing_ok(alias) {
        return Err(Error::GridTooSmall {
            grid,
            kmax,
            reason: format!("aliasing bound {alias:e} exceeds {ALIAS_TARGET:e}"),
        });
    }

    let lam = params.lambda_f64();
    let n = params.n();
    let step = std::f64::consts::TAU / grid as f64;
    let mut buf: Vec<Complex64> = (0..grid)
        .map(|j| {
            let (s, c) = (step * j as f64).sin_cos();
            let z = Complex64::new(c, s);
            let b = (z - lam) / (1.0 - z * lam);
            num_traits::pow(b, n as usize)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(grid).process(&mut buf);

    let scale = 1.0 / grid as f64;
    let mut max_imag = 0.0f64;
    let values = buf[..=kmax]
        .iter()
        .map(|c| {
            max_imag = max_imag.max((c.im * scale).abs());
            c.re * scale
        })
        .collect();

    // a sample of b carries a few ulps, amplified n-fold by the power; the
    // transform adds O(log N) ulps in the l2 sense
    let u = f64::EPSILON / 2.0;
    let nf = n as f64;
    let roundoff = (8.0 * nf + 4.0 * nf.log2().ceil() + 5.0 * (grid as f64).log2() + 8.0) * u;

    Ok(CoefficientSeries {
        params: params.clone(),
        engine: Engine::Fft,
        values,
        achieved_abs_error: alias + roundoff,
        wide: None,
        max_imag,
    })
}
