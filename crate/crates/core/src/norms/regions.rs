//! The seven coefficient ranges with distinct decay behavior.
//!
//! | region | `k` range | decay |
//! |---|---|---|
//! | I | `[0, αn]` | exponential |
//! | II | `(αn, α₀n - n^{1/3}]` | `1/|α₀n - k|` |
//! | III | `(α₀n - n^{1/3}, α₀n + n^{1/3}]` | `n^{-1/3}` |
//! | IV | `(α₀n + n^{1/3}, α₀⁻¹n - n^{1/3}]` | `n^{-1/2}((k/n-α₀)(α₀⁻¹-k/n))^{-1/4}` |
//! | V | `(α₀⁻¹n - n^{1/3}, α₀⁻¹n + n^{1/3}]` | `n^{-1/3}` |
//! | VI | `(α₀⁻¹n + n^{1/3}, α⁻¹n]` | `1/|k - α₀⁻¹n|` |
//! | VII | `(α⁻¹n, ∞)` | exponential |
//!
//! Boundaries are integers (floors for the lower edge of a gap, ceilings
//! for the upper edge) and each boundary point belongs to the lower-numbered
//! region.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::params::{ceil_shifted, floor_shifted, BlaschkeParams, Shift};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
}

impl Region {
    pub const ALL: [Region; 7] = [
        Region::I,
        Region::II,
        Region::III,
        Region::IV,
        Region::V,
        Region::VI,
        Region::VII,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        ["I", "II", "III", "IV", "V", "VI", "VII"][self.index()]
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug)]
pub struct RegionPartition {
    params: BlaschkeParams,
    alpha: BigRational,
    boundaries: [i64; 6],
}

/// `α₀/2`, the split point used when none is given.
pub fn default_alpha(params: &BlaschkeParams) -> BigRational {
    params.alpha0() / BigInt::from(2)
}

impl RegionPartition {
    /// Validates `0 < α < α₀` and that the boundaries are nondecreasing.
    pub fn new(params: &BlaschkeParams, alpha: BigRational) -> Result<Self> {
        let part = Self::unchecked(params, alpha)?;
        let b = part.boundaries;
        if b[0] < 0 || b.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Ordering {
                n: params.n(),
                boundaries: b,
            });
        }
        Ok(part)
    }

    /// Same boundaries without the ordering check. [`classify`] still
    /// assigns every `k` to exactly one region; some regions may be empty.
    ///
    /// [`classify`]: RegionPartition::classify
    pub fn unchecked(params: &BlaschkeParams, alpha: BigRational) -> Result<Self> {
        if !alpha.is_positive() || alpha >= params.alpha0() {
            return Err(Error::Precondition(format!(
                "alpha = {alpha} must lie in (0, alpha0 = {})",
                params.alpha0()
            )));
        }
        let n = params.n();
        let nr = BigRational::from_integer(BigInt::from(n));
        let left = params.left_critical();
        let right = params.right_critical();
        let boundaries = [
            (&alpha * &nr).floor().to_integer().try_into().expect("fits in i64"),
            floor_shifted(&left, 1, n, 1, 3, Shift::Down),
            ceil_shifted(&left, 1, n, 1, 3, Shift::Up),
            floor_shifted(&right, 1, n, 1, 3, Shift::Down),
            ceil_shifted(&right, 1, n, 1, 3, Shift::Up),
            (&nr / &alpha).ceil().to_integer().try_into().expect("fits in i64"),
        ];
        Ok(Self {
            params: params.clone(),
            alpha,
            boundaries,
        })
    }

    pub fn params(&self) -> &BlaschkeParams {
        &self.params
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    /// Inclusive upper ends of regions I through VI.
    pub fn boundaries(&self) -> [i64; 6] {
        self.boundaries
    }

    /// `β = (α₀ + α₀⁻¹)/2`, the middle of region IV in `k/n`.
    pub fn beta(&self) -> BigRational {
        (self.params.alpha0() + self.params.alpha0_inv()) / BigInt::from(2)
    }

    pub fn classify(&self, k: u64) -> Region {
        let k = k as i64;
        self.boundaries
            .iter()
            .position(|&b| k <= b)
            .map_or(Region::VII, |i| Region::ALL[i])
    }

    /// Inclusive `k` range of a region, `None` as upper end for region VII.
    /// `None` overall when the region is empty.
    pub fn range(&self, region: Region) -> Option<(u64, Option<u64>)> {
        let i = region.index();
        // an earlier boundary larger than a later one swallows the region
        let lo = match i {
            0 => 0,
            _ => (self.boundaries[..i].iter().copied().max().unwrap() + 1).max(0) as u64,
        };
        match region {
            Region::VII => Some((lo, None)),
            _ => {
                let hi = self.boundaries[i];
                (hi >= lo as i64).then_some((lo, Some(hi as u64)))
            }
        }
    }

    /// Number of `k ≤ kmax` in each region.
    pub fn counts(&self, kmax: u64) -> [u64; 7] {
        let mut c = [0u64; 7];
        for k in 0..=kmax {
            c[self.classify(k).index()] += 1;
        }
        c
    }
}

impl fmt::Display for RegionPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} with alpha = {}: ", self.params, self.alpha)?;
        for (i, b) in self.boundaries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} <= {b}", Region::ALL[i])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(a: i64, b: i64, n: u64) -> BlaschkeParams {
        BlaschkeParams::from_fraction(a, b, n).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn boundaries_at_n_729() {
        let part = RegionPartition::new(&params(1, 2, 729), q(1, 6)).unwrap();
        assert_eq!(part.boundaries(), [121, 234, 252, 2178, 2196, 4374]);
        assert_eq!(part.classify(121), Region::I);
        assert_eq!(part.classify(122), Region::II);
        assert_eq!(part.classify(234), Region::II);
        assert_eq!(part.classify(2187), Region::V);
        assert_eq!(part.classify(4374), Region::VI);
        assert_eq!(part.classify(4375), Region::VII);
        assert_eq!(part.range(Region::III), Some((235, Some(252))));
        assert_eq!(part.range(Region::VII), Some((4375, None)));
        assert_eq!(part.beta(), q(5, 3));
    }

    #[test]
    fn alpha_must_be_below_alpha0() {
        let p = params(1, 2, 729);
        assert!(matches!(RegionPartition::new(&p, q(1, 3)), Err(Error::Precondition(_))));
        assert!(RegionPartition::new(&p, q(0, 1)).is_err());
        assert_eq!(default_alpha(&p), q(1, 6));
    }

    #[test]
    fn small_n_is_rejected_but_unchecked_still_classifies() {
        let p = params(1, 2, 8);
        assert!(matches!(
            RegionPartition::new(&p, q(1, 6)),
            Err(Error::Ordering { n: 8, .. })
        ));
        let part = RegionPartition::unchecked(&p, q(1, 6)).unwrap();
        let empty: Vec<_> = Region::ALL.iter().filter(|r| part.range(**r).is_none()).collect();
        assert!(!empty.is_empty());
        assert_eq!(part.counts(200).iter().sum::<u64>(), 201);
    }

    proptest! {
        #[test]
        fn ranges_tile_the_half_line(num in 1i64..9, n in 1u64..5000, kmax in 0u64..3000) {
            let p = params(num, 10, n);
            let part = RegionPartition::unchecked(&p, default_alpha(&p)).unwrap();
            let mut next = 0u64;
            for r in Region::ALL {
                if let Some((lo, hi)) = part.range(r) {
                    prop_assert_eq!(lo, next);
                    for k in [lo, hi.unwrap_or(lo)] {
                        prop_assert_eq!(part.classify(k), r);
                    }
                    next = hi.map_or(u64::MAX, |h| h + 1);
                }
            }
            prop_assert_eq!(next, u64::MAX);
            prop_assert_eq!(part.counts(kmax).iter().sum::<u64>(), kmax + 1);
        }
    }
}
