//! Oscillatory engine: `B̂(k) = (1/π) Re ∫₀^π e^{i g(t)} dt`.
//!
//! The half circle is cut into panels no wider than
//! `min(π/32, π/(1 + |g′(center)|))`, so each panel holds at most half an
//! oscillation. Each panel is integrated with the 7-point Gauss / 15-point
//! Kronrod pair and bisected until the Kronrod-Gauss difference meets the
//! panel's share of the tolerance.

use std::f64::consts::PI;

use crate::asymptotics::phase::PhaseFunction;
use crate::error::{Error, Result};
use crate::params::BlaschkeParams;

pub const MAX_PANELS: usize = 1 << 20;

/// Absolute tolerance on the integral `∫₀^π e^{ig}`.
pub const QUAD_TOLERANCE: f64 = 1e-13;

/// Kronrod abscissae, nonnegative half, descending.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes (`XGK[1]`, `XGK[3]`,
/// `XGK[5]`) and the center.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Debug, PartialEq)]
pub struct OscillatoryValue {
    pub value: f64,
    /// Sum of per-panel Kronrod-Gauss differences, divided by `π`.
    pub error_estimate: f64,
    pub panels: usize,
}

/// `(Kronrod, Gauss)` estimates of `∫_a^b h`.
fn gk15(h: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = h(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = r * XGK[i];
        let pair = h(c - dx) + h(c + dx);
        k += WGK[i] * pair;
        if i % 2 == 1 {
            g += WG[i / 2] * pair;
        }
    }
    (k * r, g * r)
}

/// Initial panel edges on `[0, π]`.
fn panel_edges(phase: &PhaseFunction) -> Vec<f64> {
    let width = |t: f64| (PI / 32.0).min(PI / (1.0 + phase.g1(t).abs()));
    let mut edges = vec![0.0];
    let mut t = 0.0;
    while t < PI {
        let mut w = width(t);
        for _ in 0..64 {
            let at_center = width((t + 0.5 * w).min(PI));
            if w <= at_center {
                break;
            }
            w = at_center;
        }
        t = (t + w).min(PI);
        if PI - t < 1e-3 * w {
            t = PI;
        }
        edges.push(t);
    }
    edges
}

/// Generic adaptive integration of `h` over the given panels.
fn integrate(h: impl Fn(f64) -> f64, edges: &[f64], tol: f64) -> Result<(f64, f64, usize)> {
    let total = edges[edges.len() - 1] - edges[0];
    let mut stack: Vec<(f64, f64)> = edges.windows(2).rev().map(|w| (w[0], w[1])).collect();
    let mut sum = crate::series::Neumaier::default();
    let mut err = 0.0;
    let mut panels = 0usize;
    while let Some((a, b)) = stack.pop() {
        let (k, g) = gk15(&h, a, b);
        let e = (k - g).abs();
        if e <= tol * (b - a) / total || b - a < 1e-12 * total {
            sum.add(k);
            err += e;
            panels += 1;
        } else {
            let m = 0.5 * (a + b);
            stack.push((m, b));
            stack.push((a, m));
        }
        if panels + stack.len() > MAX_PANELS {
            return Err(Error::NonConvergence { panels: MAX_PANELS });
        }
    }
    Ok((sum.total(), err, panels))
}

pub fn coeff_oscillatory(params: &BlaschkeParams, k: u64) -> Result<OscillatoryValue> {
    let phase = PhaseFunction::new(params, k);
    let edges = panel_edges(&phase);
    let (v, e, panels) = integrate(|t| phase.g(t).cos(), &edges, QUAD_TOLERANCE)?;
    Ok(OscillatoryValue {
        value: v / PI,
        error_estimate: e / PI,
        panels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::exact::{coeff_exact, PrecisionPolicy};
    use crate::engines::fft::coeff_series_fft_default;

    fn params(a: i64, b: i64, n: u64) -> BlaschkeParams {
        BlaschkeParams::from_fraction(a, b, n).unwrap()
    }

    #[test]
    fn kronrod_rule_is_exact_to_degree_22() {
        for d in 0..=22 {
            let (k, _) = gk15(&|x: f64| x.powi(d), -1.0, 1.0);
            let want = if d % 2 == 0 { 2.0 / (d + 1) as f64 } else { 0.0 };
            assert!((k - want).abs() < 1e-14, "degree {d}: {k}");
        }
    }

    #[test]
    fn gauss_rule_is_exact_to_degree_13() {
        for d in 0..=13 {
            let (_, g) = gk15(&|x: f64| x.powi(d), -1.0, 1.0);
            let want = if d % 2 == 0 { 2.0 / (d + 1) as f64 } else { 0.0 };
            assert!((g - want).abs() < 1e-14, "degree {d}: {g}");
        }
        let (_, g) = gk15(&|x: f64| x.powi(14), -1.0, 1.0);
        assert!((g - 2.0 / 15.0).abs() > 1e-6);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        let (k, g) = gk15(&|_| 1.0, 0.0, 3.0);
        assert!((k - 3.0).abs() < 1e-14 && (g - 3.0).abs() < 1e-14);
    }

    #[test]
    fn mobius_constant_term() {
        let v = coeff_oscillatory(&params(1, 2, 1), 0).unwrap();
        assert!((v.value + 0.5).abs() <= 1e-10);
    }

    #[test]
    fn matches_exact_engine() {
        let p = params(1, 2, 8);
        let exact = coeff_exact(&p, 8, &PrecisionPolicy::default()).unwrap().to_f64();
        let osc = coeff_oscillatory(&p, 8).unwrap();
        assert!((osc.value - exact).abs() <= 1e-10);
        assert!(osc.error_estimate <= 1e-10);
    }

    #[test]
    fn matches_fft_engine() {
        let p = params(1, 2, 100);
        let fft = coeff_series_fft_default(&p, 300).unwrap();
        let osc = coeff_oscillatory(&p, 300).unwrap();
        assert!((osc.value - fft.values[300]).abs() <= 1e-8);
    }

    #[test]
    fn panels_resolve_oscillation() {
        let p = params(1, 2, 50);
        let phase = PhaseFunction::new(&p, 20);
        let edges = panel_edges(&phase);
        for w in edges.windows(2) {
            let c = 0.5 * (w[0] + w[1]);
            assert!(w[1] - w[0] <= PI / (1.0 + phase.g1(c).abs()) * 1.0001);
        }
        assert_eq!(*edges.last().unwrap(), PI);
    }
}
