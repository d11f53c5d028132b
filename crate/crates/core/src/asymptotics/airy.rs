//! Airy function `Ai` on the real line.
//!
//! On `[-9, 6]` the Maclaurin series `Ai = c₁ f - c₂ g` is summed in
//! double-double arithmetic, which absorbs the cancellation between the two
//! growing series. Outside that interval the standard asymptotic expansions
//! in `ζ = (2/3)|x|^{3/2}` are used; at `|x| = 9` their optimal truncation is
//! already below double precision.

use std::f64::consts::{FRAC_PI_4, PI};

/// `Ai(0) = 1/(3^{2/3} Γ(2/3))`.
pub const AI_ZERO: f64 = 0.355_028_053_887_817_2;
/// First negative zero of `Ai`.
pub const AI_FIRST_ZERO: f64 = -2.338_107_410_459_767;

const C1: Dd = Dd(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const C2: Dd = Dd(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

const SERIES_LO: f64 = -9.0;
const SERIES_HI: f64 = 6.0;

#[derive(Clone, Copy, Debug)]
struct Dd(f64, f64);

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd(s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd(s, b - (s - a))
}

impl Dd {
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.0, o.0);
        quick_two_sum(s.0, s.1 + self.1 + o.1)
    }

    fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        quick_two_sum(p, e + self.0 * o.1 + self.1 * o.0)
    }

    fn div_f64(self, d: f64) -> Dd {
        let q = self.0 / d;
        let r = (-q).mul_add(d, self.0) + self.1;
        quick_two_sum(q, r / d)
    }

    fn abs_hi(self) -> f64 {
        self.0.abs()
    }
}

fn maclaurin(x: f64) -> f64 {
    let x2 = Dd(x * x, x.mul_add(x, -(x * x)));
    let x3 = x2.mul(Dd(x, 0.0));
    // f = Σ c_k x^{3k}, g = Σ d_k x^{3k+1}
    let mut tf = Dd(1.0, 0.0);
    let mut tg = Dd(x, 0.0);
    let mut f = tf;
    let mut g = tg;
    let mut k = 0.0f64;
    loop {
        tf = tf.mul(x3).div_f64((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg = tg.mul(x3).div_f64((3.0 * k + 3.0) * (3.0 * k + 4.0));
        f = f.add(tf);
        g = g.add(tg);
        k += 1.0;
        if tf.abs_hi() <= 1e-34 * f.abs_hi().max(1.0) && tg.abs_hi() <= 1e-34 * g.abs_hi().max(1.0) {
            break;
        }
    }
    let v = C1.mul(f).add(C2.mul(g).neg());
    v.0 + v.1
}

/// Coefficients `u_k` of the asymptotic expansions.
fn u_coeffs(count: usize) -> Vec<f64> {
    let mut u = vec![1.0];
    for k in 1..count {
        let kf = k as f64;
        let prev = u[k - 1];
        u.push(prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf));
    }
    u
}

/// `Σ (-1)^k u_{start + 2k} / ζ^{start + 2k}` (or every term when `stride`
/// is 1), truncated at the smallest term.
fn asymptotic_sum(zeta: f64, start: usize, stride: usize, alternate_sign: bool) -> f64 {
    let u = u_coeffs(40);
    let mut sum = 0.0f64;
    let mut last = f64::INFINITY;
    let mut sign = 1.0;
    let mut i = start;
    while i < u.len() {
        let term = u[i] / zeta.powi(i as i32);
        if term >= last || term < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
        sum += sign * term;
        last = term;
        if alternate_sign {
            sign = -sign;
        }
        i += stride;
    }
    sum
}

/// `Ai(x)`.
pub fn airy(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if (SERIES_LO..=SERIES_HI).contains(&x) {
        return maclaurin(x);
    }
    if x > SERIES_HI {
        asymptotic_positive(x)
    } else {
        asymptotic_negative(-x)
    }
}

fn asymptotic_positive(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    if zeta > 745.0 {
        return 0.0;
    }
    let s = asymptotic_sum(zeta, 0, 1, true);
    (-zeta).exp() / (2.0 * PI.sqrt() * x.powf(0.25)) * s
}

/// `Ai(-y)` for large `y`.
fn asymptotic_negative(y: f64) -> f64 {
    let zeta = 2.0 / 3.0 * y.powf(1.5);
    let even = asymptotic_sum(zeta, 0, 2, true);
    let odd = asymptotic_sum(zeta, 1, 2, true);
    let phase = zeta - FRAC_PI_4;
    (phase.cos() * even + phase.sin() * odd) / (PI.sqrt() * y.powf(0.25))
}

/// Leading oscillatory behavior `π^{-1/2} y^{-1/4} cos(ζ - π/4)` of
/// `Ai(-y)` for `y > 0`.
pub fn airy_leading_negative(y: f64) -> f64 {
    let zeta = 2.0 / 3.0 * y.powf(1.5);
    (zeta - FRAC_PI_4).cos() / (PI.sqrt() * y.powf(0.25))
}

#[cfg(test)]
mod tests {
    use super::*;

    // high-precision reference values (50-digit arithmetic)
    #[allow(clippy::excessive_precision)]
    const REFERENCE: [(f64, f64); 16] = [
        (0.0, 0.35502805388781723926),
        (-2.33811, -1.8158136371558482062e-6),
        (-10.0, 0.040241238486443190689),
        (-1.0, 0.5355608832923521188),
        (1.0, 0.13529241631288141552),
        (5.0, 0.00010834442813607441735),
        (-5.0, 0.35076100902411431979),
        (-6.0, -0.32914517362982310523),
        (-8.0, -0.052705050356386202622),
        (-9.0, -0.022133721547341403674),
        (-9.5, 0.31910324771912820138),
        (-15.0, 0.27821749087082892953),
        (-20.0, -0.17640612707798468959),
        (6.0, 9.9476943602528895702e-6),
        (7.0, 7.4921288639971670808e-7),
        (3.0, 0.0065911393574607191443),
    ];

    #[test]
    fn matches_reference_values() {
        for (x, want) in REFERENCE {
            let got = airy(x);
            assert!((got - want).abs() <= 1e-13, "Ai({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn first_zero() {
        assert!(airy(-2.33811).abs() <= 1e-5);
        assert!(airy(AI_FIRST_ZERO).abs() <= 1e-15);
    }

    #[test]
    fn value_at_origin() {
        assert!((airy(0.0) - 0.3550280539).abs() <= 1e-9);
        assert_eq!(airy(0.0), AI_ZERO);
    }

    #[test]
    fn leading_asymptotic_at_minus_ten() {
        assert!((airy(-10.0) - airy_leading_negative(10.0)).abs() <= 2e-3);
    }

    #[test]
    fn branches_agree_at_switchovers() {
        assert!((maclaurin(SERIES_LO) - asymptotic_negative(-SERIES_LO)).abs() < 1e-14);
        assert!((maclaurin(SERIES_HI) - asymptotic_positive(SERIES_HI)).abs() < 1e-13);
    }

    #[test]
    fn oscillation_remainder_order() {
        let mut x = 5.0;
        while x <= 20.0 {
            let diff = (airy(-x) - airy_leading_negative(x)).abs();
            assert!(diff <= 0.6 * x.powf(-1.75), "x = {x}: {diff}");
            x += 0.01;
        }
    }

    #[test]
    fn satisfies_airy_equation() {
        let h = 1e-3;
        for x in [-15.0, -8.5, -3.0, 0.5, 4.0, 7.5] {
            let second = (airy(x + h) - 2.0 * airy(x) + airy(x - h)) / (h * h);
            assert!((second - x * airy(x)).abs() <= 1e-5, "x = {x}");
        }
    }
}
