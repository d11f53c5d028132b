//! Norm scaling experiments over geometric `n` grids.

use num_rational::{BigRational, Ratio};
use rayon::prelude::*;

use crate::engines::exact::{coeff_series_exact, PrecisionPolicy};
use crate::engines::fft::coeff_series_fft_default;
use crate::error::{Error, Result};
use crate::norms::{lp_norm, Exponent};
use crate::params::BlaschkeParams;

/// Ordinary least-squares line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// `√(RSS/(m-2)/Sxx)`.
    pub stderr: f64,
    pub rss: f64,
}

pub fn fit_exponent(points: &[(f64, f64)]) -> Result<LineFit> {
    let m = points.len();
    if m < 4 {
        return Err(Error::Precondition(format!("need at least 4 points, got {m}")));
    }
    let mf = m as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / mf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / mf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all abscissae are equal".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(LineFit {
        slope,
        intercept,
        stderr: (rss / (mf - 2.0) / sxx).sqrt(),
        rss,
    })
}

/// Residual sum of squares of `y = c + slope·x` with the slope fixed and
/// the intercept fitted.
pub fn fixed_slope_rss(points: &[(f64, f64)], slope: f64) -> f64 {
    let r: Vec<f64> = points.iter().map(|p| p.1 - slope * p.0).collect();
    let mean = r.iter().sum::<f64>() / r.len() as f64;
    r.iter().map(|v| (v - mean).powi(2)).sum()
}

/// Predicted slope of `log ‖B‖_p` against `log n`: `(2-p)/(2p)` below 4,
/// `(1-p)/(3p)` above, `-1/3` at infinity. At `p = 4` the regression is
/// against `(1/4) log(log n / n)` and the predicted slope is 1.
pub fn theory_slope(p: &Exponent) -> Ratio<i64> {
    match p {
        Exponent::Infinity => Ratio::new(-1, 3),
        Exponent::Finite(r) => {
            let four = Ratio::from_integer(4);
            if *r < four {
                (Ratio::from_integer(2) - r) / (Ratio::from_integer(2) * r)
            } else if *r == four {
                Ratio::from_integer(1)
            } else {
                (Ratio::from_integer(1) - r) / (Ratio::from_integer(3) * r)
            }
        }
    }
}

/// `lo, 2lo, 4lo, … ≤ hi`.
pub fn geometric_grid(lo: u64, hi: u64) -> Vec<u64> {
    std::iter::successors(Some(lo), |n| n.checked_mul(2))
        .take_while(|n| *n <= hi)
        .collect()
}

fn validate_grid(grid: &[u64]) -> Result<()> {
    if grid.len() < 4 {
        return Err(Error::Precondition("n grid needs at least 4 points".into()));
    }
    if grid[0] < 64 {
        return Err(Error::Precondition("smallest n must be at least 64".into()));
    }
    if grid.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::Precondition("n grid must have ratio 2".into()));
    }
    Ok(())
}

/// `‖B‖_p` from the FFT engine over the default range.
pub fn measure_norm(params: &BlaschkeParams, p: &Exponent) -> Result<f64> {
    let series = coeff_series_fft_default(params, params.default_kmax())?;
    Ok(lp_norm(&series, p)?.value)
}

/// Relative agreement required between the exact and FFT spot check.
pub const SPOT_CHECK_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SpotCheck {
    pub n: u64,
    pub exact: f64,
    pub fft: f64,
}

fn spot_check(params: &BlaschkeParams, p: &Exponent, fft: f64) -> Result<SpotCheck> {
    let series = coeff_series_exact(params, params.default_kmax(), &PrecisionPolicy::default())?;
    let exact = lp_norm(&series, p)?.value;
    if (exact - fft).abs() > SPOT_CHECK_TOLERANCE * exact.abs().max(1.0) {
        return Err(Error::EngineMismatch {
            n: params.n(),
            exact,
            fft,
        });
    }
    Ok(SpotCheck {
        n: params.n(),
        exact,
        fft,
    })
}

#[derive(Clone, Debug)]
pub struct ScalingFit {
    pub lambda: BigRational,
    pub p: Exponent,
    pub n_grid: Vec<u64>,
    pub norms: Vec<f64>,
    /// Regression abscissae: `log n`, or `(1/4) log(log n / n)` at `p = 4`.
    pub abscissae: Vec<f64>,
    pub fitted_slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
    pub theory_slope: Ratio<i64>,
    pub log_corrected: bool,
    pub warning: Option<String>,
    pub spot_check: SpotCheck,
}

impl ScalingFit {
    pub fn theory_slope_f64(&self) -> f64 {
        *self.theory_slope.numer() as f64 / *self.theory_slope.denom() as f64
    }
}

fn log_corrected_abscissa(n: f64) -> f64 {
    0.25 * (n.ln() / n).ln()
}

pub fn run_norm_scaling(lambda: &BigRational, p: &Exponent, n_grid: &[u64]) -> Result<ScalingFit> {
    validate_grid(n_grid)?;
    let params: Vec<BlaschkeParams> = n_grid
        .iter()
        .map(|&n| BlaschkeParams::new(lambda.clone(), n))
        .collect::<Result<_>>()?;
    let norms: Vec<f64> = params.par_iter().map(|pr| measure_norm(pr, p)).collect::<Result<_>>()?;
    let spot_check = spot_check(&params[0], p, norms[0])?;

    let four = Exponent::Finite(Ratio::from_integer(4));
    let log_corrected = *p == four;
    let warning = match p {
        Exponent::Finite(_) if !log_corrected && (p.as_f64() - 4.0).abs() <= 0.05 => Some(format!(
            "p = {p} is within 0.05 of 4; convergence to the predicted slope is slow"
        )),
        _ => None,
    };
    let abscissae: Vec<f64> = n_grid
        .iter()
        .map(|&n| {
            let nf = n as f64;
            if log_corrected {
                log_corrected_abscissa(nf)
            } else {
                nf.ln()
            }
        })
        .collect();
    let points: Vec<(f64, f64)> = abscissae.iter().zip(&norms).map(|(x, v)| (*x, v.ln())).collect();
    let fit = fit_exponent(&points)?;
    Ok(ScalingFit {
        lambda: lambda.clone(),
        p: *p,
        n_grid: n_grid.to_vec(),
        norms,
        abscissae,
        fitted_slope: fit.slope,
        slope_stderr: fit.stderr,
        intercept: fit.intercept,
        theory_slope: theory_slope(p),
        log_corrected,
        warning,
        spot_check,
    })
}

/// `‖B‖₄⁴ n / log n` over a grid, with a comparison of the log-corrected law
/// `‖B‖₄ ≍ (log n / n)^{1/4}` against a pure power `n^{-1/4}`.
#[derive(Clone, Debug)]
pub struct P4Scan {
    pub n_grid: Vec<u64>,
    pub norms: Vec<f64>,
    pub ratios: Vec<f64>,
    /// RSS of `log ‖B‖₄ = c + (1/4) log(log n / n)`.
    pub log_model_rss: f64,
    /// RSS of `log ‖B‖₄ = c - (1/4) log n`.
    pub power_model_rss: f64,
    /// Free-slope fits of both models, for reference.
    pub log_model_fit: LineFit,
    pub power_model_fit: LineFit,
}

impl P4Scan {
    pub fn max_min_ratio(&self) -> f64 {
        let max = self.ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.ratios.iter().copied().fold(f64::INFINITY, f64::min);
        max / min
    }

    pub fn log_model_is_better(&self) -> bool {
        self.log_model_rss < self.power_model_rss
    }
}

pub fn p4_ratio_scan(lambda: &BigRational, n_grid: &[u64]) -> Result<P4Scan> {
    validate_grid(n_grid)?;
    let four = Exponent::Finite(Ratio::from_integer(4));
    let norms: Vec<f64> = n_grid
        .par_iter()
        .map(|&n| measure_norm(&BlaschkeParams::new(lambda.clone(), n)?, &four))
        .collect::<Result<_>>()?;
    let ratios = n_grid
        .iter()
        .zip(&norms)
        .map(|(&n, v)| {
            let nf = n as f64;
            v.powi(4) * nf / nf.ln()
        })
        .collect();
    let log_points: Vec<(f64, f64)> = n_grid
        .iter()
        .zip(&norms)
        .map(|(&n, v)| (log_corrected_abscissa(n as f64), v.ln()))
        .collect();
    let power_points: Vec<(f64, f64)> = n_grid
        .iter()
        .zip(&norms)
        .map(|(&n, v)| ((n as f64).ln(), v.ln()))
        .collect();
    Ok(P4Scan {
        n_grid: n_grid.to_vec(),
        norms,
        ratios,
        log_model_rss: fixed_slope_rss(&log_points, 1.0),
        power_model_rss: fixed_slope_rss(&power_points, -0.25),
        log_model_fit: fit_exponent(&log_points)?,
        power_model_fit: fit_exponent(&power_points)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn lambda(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn exact_line() {
        let pts: Vec<(f64, f64)> = (0..6).map(|i| (i as f64, -(i as f64) / 3.0 + 2.0)).collect();
        let f = fit_exponent(&pts).unwrap();
        assert!((f.slope + 1.0 / 3.0).abs() < 1e-15);
        assert!(f.stderr < 1e-15);
    }

    #[test]
    fn noisy_line() {
        let noise = [1e-6, -1e-6, 5e-7, -8e-7, 1e-6, -2e-7, 0.0, 9e-7];
        let pts: Vec<(f64, f64)> = noise
            .iter()
            .enumerate()
            .map(|(i, e)| (i as f64, 0.5 * i as f64 + e))
            .collect();
        let f = fit_exponent(&pts).unwrap();
        assert!((f.slope - 0.5).abs() <= 1e-5);
    }

    #[test]
    fn fit_preconditions() {
        let three = [(0.0, 1.0), (1.0, 2.0), (2.0, 3.0)];
        assert!(matches!(fit_exponent(&three), Err(Error::Precondition(_))));
        let flat = [(1.0, 1.0), (1.0, 2.0), (1.0, 3.0), (1.0, 4.0)];
        assert!(matches!(fit_exponent(&flat), Err(Error::Degenerate(_))));
    }

    #[test]
    fn theory_slopes_are_exact() {
        let t = |s: &str| theory_slope(&s.parse().unwrap());
        assert_eq!(t("1"), Ratio::new(1, 2));
        assert_eq!(t("2"), Ratio::from_integer(0));
        assert_eq!(t("3"), Ratio::new(-1, 6));
        assert_eq!(t("6"), Ratio::new(-5, 18));
        assert_eq!(t("inf"), Ratio::new(-1, 3));
        assert_eq!(t("4"), Ratio::from_integer(1));
        assert_eq!(t("7/2"), Ratio::new(-3, 14));
    }

    #[test]
    fn grids() {
        assert_eq!(geometric_grid(128, 8192), vec![128, 256, 512, 1024, 2048, 4096, 8192]);
        assert!(validate_grid(&[32, 64, 128, 256]).is_err());
        assert!(validate_grid(&[64, 128, 256]).is_err());
        assert!(validate_grid(&[64, 128, 384, 768]).is_err());
    }

    #[test]
    fn two_norm_slope_is_flat() {
        let f = run_norm_scaling(&lambda(1, 2), &"2".parse().unwrap(), &geometric_grid(64, 512)).unwrap();
        assert!(f.fitted_slope.abs() <= 0.01);
        assert!(f.warning.is_none());
    }

    #[test]
    fn warns_near_four() {
        let f = run_norm_scaling(&lambda(1, 2), &"4.02".parse().unwrap(), &geometric_grid(64, 512)).unwrap();
        assert!(f.warning.is_some());
        let f = run_norm_scaling(&lambda(1, 2), &"4".parse().unwrap(), &geometric_grid(64, 512)).unwrap();
        assert!(f.log_corrected && f.warning.is_none());
    }

    proptest! {
        #[test]
        fn slope_ignores_constant_rescaling(scale in 1e-3f64..1e3, ys in proptest::collection::vec(-5f64..5.0, 5..10)) {
            let pts: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, y)| (i as f64, *y)).collect();
            let shifted: Vec<(f64, f64)> = pts.iter().map(|(x, y)| (*x, y + scale.ln())).collect();
            let a = fit_exponent(&pts).unwrap();
            let b = fit_exponent(&shifted).unwrap();
            prop_assert!((a.slope - b.slope).abs() <= 1e-9);
            prop_assert!((a.stderr - b.stderr).abs() <= 1e-9);
        }
    }
}
