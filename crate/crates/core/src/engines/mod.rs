pub mod exact;
pub mod fft;
pub mod oscillatory;
pub mod tail;

use crate::error::Result;
use crate::params::BlaschkeParams;
use crate::series::CoefficientSeries;

/// Integer size (bits) below which [`coeff_series_auto`] prefers the exact
/// recurrence.
pub const AUTO_EXACT_BITS: u64 = 1 << 14;

/// Exact series when the integers stay small, FFT otherwise.
pub fn coeff_series_auto(params: &BlaschkeParams, kmax: usize) -> Result<CoefficientSeries> {
    coeff_series_auto_with(params, kmax, &exact::PrecisionPolicy::default())
}

/// [`coeff_series_auto`] with an explicit policy for the exact engine.
pub fn coeff_series_auto_with(
    params: &BlaschkeParams,
    kmax: usize,
    policy: &exact::PrecisionPolicy,
) -> Result<CoefficientSeries> {
    if exact::exact_size_estimate(params, kmax as u64) <= AUTO_EXACT_BITS {
        exact::coeff_series_exact(params, kmax, policy)
    } else {
        fft::coeff_series_fft_default(params, kmax)
    }
}
