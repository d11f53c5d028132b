//! Share of `‖B‖₄⁴` carried by the critical window near `α₀⁻¹n`.

use num_rational::BigRational;

use crate::engines::fft::coeff_series_fft_default;
use crate::error::{Error, Result};
use crate::lab::weyl::critical_window;
use crate::params::BlaschkeParams;
use crate::series::Neumaier;

#[derive(Clone, Debug, PartialEq)]
pub struct RegimeMass {
    pub n: u64,
    pub window: (u64, u64),
    /// `Σ_{k ∈ I_n} |B̂(k)|⁴`.
    pub mass: f64,
    /// `‖B‖₄⁴` over the default range.
    pub total: f64,
    /// `mass / (log n / n)`.
    pub ratio: f64,
}

pub fn airy_regime_mass(lambda: &BigRational, n: u64) -> Result<RegimeMass> {
    if n < 1024 {
        return Err(Error::Precondition(format!("n = {n} is below 1024")));
    }
    let params = BlaschkeParams::new(lambda.clone(), n)?;
    let window = critical_window(&params)?;
    let series = coeff_series_fft_default(&params, params.default_kmax())?;
    let mut mass = Neumaier::default();
    let mut total = Neumaier::default();
    for (k, v) in series.values.iter().enumerate() {
        let m = v.powi(4);
        total.add(m);
        if (window.0..=window.1).contains(&(k as u64)) {
            mass.add(m);
        }
    }
    let nf = n as f64;
    Ok(RegimeMass {
        n,
        window,
        mass: mass.total(),
        total: total.total(),
        ratio: mass.total() / (nf.ln() / nf),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{default_alpha, Region, RegionPartition};

    #[test]
    fn window_lies_in_bulk_and_transition() {
        for n in [1024u64, 4096, 8192] {
            let p = BlaschkeParams::from_fraction(1, 2, n).unwrap();
            let part = RegionPartition::new(&p, default_alpha(&p)).unwrap();
            let (lo, hi) = critical_window(&p).unwrap();
            for k in [lo, hi] {
                assert!(matches!(part.classify(k), Region::IV | Region::V));
            }
        }
    }

    #[test]
    fn window_is_a_fraction_of_the_total() {
        let half = BigRational::new(1.into(), 2.into());
        let w = airy_regime_mass(&half, 2048).unwrap();
        assert!(w.mass > 0.0 && w.mass < w.total);
        assert!(airy_regime_mass(&half, 512).is_err());
    }

    #[test]
    fn ratio_to_log_law_is_bounded_below() {
        // measured: 1.501e-3, 1.535e-3, 1.596e-3, 1.674e-3 for n = 2^10..2^13
        let half = BigRational::new(1.into(), 2.into());
        let ratios: Vec<f64> = (10..=13)
            .map(|e| airy_regime_mass(&half, 1 << e).unwrap().ratio)
            .collect();
        for r in &ratios {
            assert!((1.4e-3..=1.8e-3).contains(r), "{ratios:?}");
        }
        for w in ratios.windows(2) {
            assert!(w[1] >= w[0], "{ratios:?}");
        }
    }
}
