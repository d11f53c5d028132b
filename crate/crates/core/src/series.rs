use std::fmt;

use crate::hp::HpReal;
use crate::params::BlaschkeParams;

/// Which engine produced a [`CoefficientSeries`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    Exact,
    Fft,
    Oscillatory,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Exact => "exact",
            Engine::Fft => "fft",
            Engine::Oscillatory => "oscillatory",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Taylor coefficients `B̂(0..=kmax)` of `B = b^n`.
///
/// `values` are doubles; `achieved_abs_error` bounds `|values[k] - B̂(k)|`
/// for every `k`. The exact engine also keeps `wide`, a 64-bit-mantissa copy
/// with unbounded exponent range, for coefficients that underflow a double.
#[derive(Clone, Debug)]
pub struct CoefficientSeries {
    pub params: BlaschkeParams,
    pub engine: Engine,
    pub values: Vec<f64>,
    pub achieved_abs_error: f64,
    pub wide: Option<Vec<HpReal>>,
    /// Largest discarded imaginary part (FFT engine only).
    pub max_imag: f64,
}

/// Magnitude below which FFT coefficients are roundoff, not signal.
pub const FFT_RESOLUTION: f64 = 1e-12;

impl CoefficientSeries {
    pub fn kmax(&self) -> usize {
        self.values.len() - 1
    }

    /// `log2 |B̂(k)|`, exact-engine values keep their full exponent range.
    pub fn log2_abs(&self, k: usize) -> f64 {
        match &self.wide {
            Some(w) => w[k].log2_abs(),
            None => self.values[k].abs().log2(),
        }
    }

    /// FFT values this small carry no information; only the exact engine is
    /// authoritative there.
    pub fn below_resolution(&self, k: usize) -> bool {
        self.engine == Engine::Fft && self.values[k].abs() < FFT_RESOLUTION
    }

    /// `Σ B̂(k)`, which tends to `B(1) = 1`.
    pub fn sum(&self) -> f64 {
        compensated_sum(self.values.iter().copied())
    }

    /// `Σ (-1)^k B̂(k)`, which tends to `B(-1) = (-1)^n`.
    pub fn alternating_sum(&self) -> f64 {
        compensated_sum(
            self.values
                .iter()
                .enumerate()
                .map(|(k, v)| if k % 2 == 0 { *v } else { -v }),
        )
    }

    /// `Σ B̂(k)²`, which tends to `‖B‖₂² = 1`.
    pub fn sum_of_squares(&self) -> f64 {
        compensated_sum(self.values.iter().map(|v| v * v))
    }
}

/// Neumaier compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.c
    }
}

pub fn compensated_sum(it: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Neumaier::default();
    it.into_iter().for_each(|x| acc.add(x));
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_bits() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(xs), 2.0);
    }
}
